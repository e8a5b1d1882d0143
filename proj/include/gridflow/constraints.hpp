#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gridflow/grid.hpp"
#include "gridflow/problem.hpp"

namespace gridflow {

// The eight relaxed constraint blocks, in canonical order.
enum class BlockId : int {
    Continuity = 0,     // finite-difference continuity equation, all edges
    RhoInitial = 1,     // rho(., t_1) = initial samples
    RhoFinal = 2,       // rho(., t_{Nt+1}) = final samples
    VertexInitial = 3,  // gamma/S/D at t_1
    VertexFinal = 4,    // gamma/S/D at t_{Nt+1}
    Coupling = 5,       // flux balance at every vertex, every time node
    VertexOde = 6,      // backward-difference ODEs for gamma (and S, D)
    Mass = 7            // total bookkeeping mass at t_2..t_{Nt+1}
};

constexpr std::size_t kBlockCount = 8;
extern const std::array<const char*, kBlockCount> kBlockNames;

struct ConstraintBlock {
    std::string name;
    std::size_t begin = 0, end = 0;  // row range [begin, end)
    double delta = 0.0;              // ball radius of the relaxation
    std::size_t rows() const { return end - begin; }
};

struct BlockTolerances {
    // delta_j = scale * sqrt(rows_j), keeping per-row slack independent of
    // the resolution; `absolute` overrides the whole radius of one block.
    double scale = 1e-4;
    std::array<std::optional<double>, kBlockCount> absolute{};
};

// Sparse rows of all blocks stacked vertically (CSR), with the right-hand
// side and the diagonal W of the grid-function inner product on the primal
// space. Every row is pre-multiplied by the square root of its quadrature
// weight, so Euclidean residual norms match the weighted norms the block
// tolerances are stated in. The mass rows carry no weight; each one is the
// bookkeeping error at a single time node.
class ConstraintSystem {
  public:
    std::size_t rows() const { return row_ptr_.size() - 1; }
    std::size_t cols() const { return cols_; }
    const std::array<ConstraintBlock, kBlockCount>& blocks() const { return blocks_; }
    const ConstraintBlock& block(BlockId id) const { return blocks_[int(id)]; }
    const std::vector<double>& rhs() const { return rhs_; }
    const std::vector<double>& weights() const { return weights_; }

    // y = A u. Throws Error(Usage) on dimension mismatch.
    void apply_forward(const std::vector<double>& u, std::vector<double>& y) const;
    std::vector<double> apply_forward(const std::vector<double>& u) const;

    // v = A* y = W^{-1} A^T y, the adjoint between the W-weighted primal
    // space and the Euclidean row space.
    void apply_adjoint(const std::vector<double>& y, std::vector<double>& v) const;
    std::vector<double> apply_adjoint(const std::vector<double>& y) const;

    // Euclidean norm of (A u)_j - b_j per block, given y = A u.
    std::array<double, kBlockCount> block_residual_norms(const std::vector<double>& y) const;

    // Row access for tests and diagnostics.
    std::size_t row_nnz(std::size_t row) const { return row_ptr_[row + 1] - row_ptr_[row]; }
    std::pair<std::size_t, double> row_entry(std::size_t row, std::size_t n) const {
        const std::size_t at = row_ptr_[row] + n;
        return {col_[at], val_[at]};
    }

  private:
    friend class SystemBuilder;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_;
    std::vector<double> val_;
    std::vector<double> rhs_;
    std::vector<double> weights_;
    std::array<ConstraintBlock, kBlockCount> blocks_;
    std::size_t cols_ = 0;
};

// Row-by-row construction of a ConstraintSystem. The assembly routine builds
// on this; tests use it for hand-made systems.
class SystemBuilder {
  public:
    SystemBuilder(std::size_t cols, std::vector<double> weights);

    void begin_block(BlockId id);
    void end_block();

    // One finished row; `weight` multiplies every coefficient and the rhs.
    void add_row(std::initializer_list<std::pair<std::size_t, double>> entries,
                 double rhs, double weight = 1.0);

    // Incremental variant for long rows.
    void push(std::size_t col, double val);
    void finish_row(double rhs);

    ConstraintSystem take(const BlockTolerances& tolerances = {});

  private:
    ConstraintSystem sys_;
    int current_ = 0;
};

// Emits all blocks for the problem's coupling/boundary mode. Throws
// Error(ModeMismatch) when the mode asks for data the problem lacks.
ConstraintSystem assemble_constraints(const TransportProblem& problem,
                                      const GridSpec& grid, const Layout& layout,
                                      const EndpointData& endpoint,
                                      const BlockTolerances& tolerances = {});

// Largest singular value of A as a map from the W-weighted primal space to
// the Euclidean row space, via power iteration on A*A. Deterministic for a
// fixed seed; nondecreasing in the iteration count up to rounding.
double estimate_operator_norm(const ConstraintSystem& system, int iterations = 100,
                              unsigned seed = 0x9e3779b9u);

}  // namespace gridflow
