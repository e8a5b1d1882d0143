// Acceptance suite: one pass/fail line per criterion. Placeholder until the
// library is complete.
int main() { return 1; }
