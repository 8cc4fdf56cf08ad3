#include "strata/lp.hpp"

#include "strata/errors.hpp"

namespace strata {

namespace {

// Tableau simplex on min c.x, Ax = b, x >= 0. Bland's rule, so no cycling.
class Simplex {
public:
    Simplex(std::vector<std::vector<mpq_class>> A, std::vector<mpq_class> b)
        : A_(std::move(A)), b_(std::move(b)), m_(b_.size()), n_(m_ ? A_[0].size() : 0) {
        for (std::size_t i = 0; i < m_; ++i)
            if (b_[i] < 0) {
                for (auto& v : A_[i]) v = -v;
                b_[i] = -b_[i];
            }
    }

    // returns false when the problem is infeasible
    bool phase1() {
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t r = 0; r < m_; ++r) A_[r].push_back(r == i ? 1 : 0);
            basis_[i] = n_ + i;
        }
        std::vector<mpq_class> cost(n_ + m_, 0);
        for (std::size_t i = 0; i < m_; ++i) cost[n_ + i] = 1;
        run(cost);
        if (objective(cost) != 0) return false;
        // pivot remaining artificials out of the basis where possible
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j)
                if (A_[r][j] != 0) {
                    pivot(r, j);
                    break;
                }
        }
        for (std::size_t r = 0; r < m_; ++r) A_[r].resize(n_);
        return true;
    }

    // returns false when unbounded
    bool phase2(const std::vector<mpq_class>& c) {
        std::vector<mpq_class> cost = c;
        cost.resize(n_, 0);
        return run(cost);
    }

    std::vector<mpq_class> solution() const {
        std::vector<mpq_class> x(n_, 0);
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < n_) x[basis_[r]] = b_[r];
        return x;
    }

    mpq_class objective(const std::vector<mpq_class>& cost) const {
        mpq_class v = 0;
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < cost.size()) v += cost[basis_[r]] * b_[r];
        return v;
    }

private:
    void pivot(std::size_t row, std::size_t col) {
        mpq_class inv = 1 / A_[row][col];
        for (auto& v : A_[row]) v *= inv;
        b_[row] *= inv;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == row || A_[r][col] == 0) continue;
            mpq_class f = A_[r][col];
            for (std::size_t j = 0; j < A_[r].size(); ++j) A_[r][j] -= f * A_[row][j];
            b_[r] -= f * b_[row];
        }
        basis_[row] = col;
    }

    bool run(const std::vector<mpq_class>& cost) {
        const std::size_t ncols = A_.empty() ? 0 : A_[0].size();
        while (true) {
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols && enter == ncols; ++j) {
                mpq_class rc = j < cost.size() ? cost[j] : mpq_class(0);
                for (std::size_t r = 0; r < m_; ++r) {
                    std::size_t bj = basis_[r];
                    mpq_class cb = bj < cost.size() ? cost[bj] : mpq_class(0);
                    rc -= cb * A_[r][j];
                }
                if (rc < 0) enter = j; // Bland: first improving column
            }
            if (enter == ncols) return true; // optimal
            std::size_t leave = m_;
            mpq_class best;
            for (std::size_t r = 0; r < m_; ++r) {
                if (A_[r][enter] <= 0) continue;
                mpq_class ratio = b_[r] / A_[r][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == m_) return false; // unbounded
            pivot(leave, enter);
        }
    }

    std::vector<std::vector<mpq_class>> A_;
    std::vector<mpq_class> b_;
    std::size_t m_, n_;
    std::vector<std::size_t> basis_;
};

} // namespace

LPOutcome solve_lp(const std::vector<std::vector<mpq_class>>& A, const std::vector<mpq_class>& b,
                   const std::vector<mpq_class>& c) {
    Simplex s(A, b);
    if (!s.phase1()) return {LPOutcome::Status::Infeasible, {}, 0};
    if (!s.phase2(c)) return {LPOutcome::Status::Unbounded, {}, 0};
    std::vector<mpq_class> x = s.solution();
    mpq_class obj = 0;
    for (std::size_t j = 0; j < c.size() && j < x.size(); ++j) obj += c[j] * x[j];
    return {LPOutcome::Status::Optimal, std::move(x), obj};
}

NewtonMembership newton_polyhedron_membership(const Exps& point, const std::vector<Exps>& generators) {
    if (generators.empty()) throw Error("Newton polyhedron of the zero ideal");
    const std::size_t n = point.size();
    const std::size_t s = generators.size();
    for (const auto& g : generators)
        if (g.size() != n) throw Error("exponent length mismatch");

    // feasibility: lambda >= 0, sum lambda = 1, sum lambda_i e_i + slack = point
    {
        std::vector<std::vector<mpq_class>> A(1 + n, std::vector<mpq_class>(s + n, 0));
        std::vector<mpq_class> b(1 + n, 0);
        for (std::size_t i = 0; i < s; ++i) A[0][i] = 1;
        b[0] = 1;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < s; ++i) A[1 + k][i] = generators[i][k];
            A[1 + k][s + k] = 1; // slack: point dominates the convex combination
            b[1 + k] = point[k];
        }
        LPOutcome r = solve_lp(A, b, std::vector<mpq_class>(s + n, 0));
        if (r.status == LPOutcome::Status::Optimal) {
            NewtonMembership m;
            m.inside = true;
            m.weights.assign(r.x.begin(), r.x.begin() + s);
            return m;
        }
    }

    // separation: maximize delta subject to w.e_i - w.point >= delta,
    // w >= 0, sum w = 1. Columns: w_1..w_n, delta+, delta-, s_1..s_s.
    std::vector<std::vector<mpq_class>> A(s + 1, std::vector<mpq_class>(n + 2 + s, 0));
    std::vector<mpq_class> b(s + 1, 0);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t k = 0; k < n; ++k)
            A[i][k] = mpq_class(generators[i][k]) - mpq_class(point[k]);
        A[i][n] = -1;
        A[i][n + 1] = 1;
        A[i][n + 2 + i] = -1;
    }
    for (std::size_t k = 0; k < n; ++k) A[s][k] = 1;
    b[s] = 1;
    std::vector<mpq_class> c(n + 2 + s, 0);
    c[n] = -1; // min(delta- - delta+) = -max delta
    c[n + 1] = 1;
    LPOutcome r = solve_lp(A, b, c);
    if (r.status != LPOutcome::Status::Optimal || -r.objective <= 0)
        throw Error("Newton polyhedron separation failed unexpectedly");
    NewtonMembership m;
    m.inside = false;
    m.separating.assign(r.x.begin(), r.x.begin() + n);
    return m;
}

} // namespace strata
