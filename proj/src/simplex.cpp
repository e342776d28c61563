#include "netlasso/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace netlasso {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kReducedCostTol = 1e-9;
constexpr double kFeasTol = 1e-7;

class Tableau {
public:
    Tableau(const LinearProgram& lp) {
        m_ = lp.num_rows();
        n_structural_ = lp.num_vars();

        // Column layout: structural | slack/surplus | artificial | rhs.
        int slack_count = 0;
        for (const auto& row : lp.rows()) {
            if (row.relation != '=') ++slack_count;
        }
        n_total_ = n_structural_ + slack_count;
        first_artificial_ = n_total_;

        std::vector<std::vector<double>> dense(static_cast<std::size_t>(m_));
        std::vector<double> rhs(static_cast<std::size_t>(m_));
        std::vector<char> relation(static_cast<std::size_t>(m_));
        for (int r = 0; r < m_; ++r) {
            const auto& row = lp.rows()[static_cast<std::size_t>(r)];
            dense[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(n_structural_), 0.0);
            for (const auto& [var, coeff] : row.terms) {
                dense[static_cast<std::size_t>(r)].at(static_cast<std::size_t>(var)) += coeff;
            }
            rhs[static_cast<std::size_t>(r)] = row.rhs;
            relation[static_cast<std::size_t>(r)] = row.relation;
            // Normalize to rhs >= 0 so slack columns can start basic.
            if (rhs[static_cast<std::size_t>(r)] < 0.0) {
                for (double& v : dense[static_cast<std::size_t>(r)]) v = -v;
                rhs[static_cast<std::size_t>(r)] = -rhs[static_cast<std::size_t>(r)];
                if (relation[static_cast<std::size_t>(r)] == '<') {
                    relation[static_cast<std::size_t>(r)] = '>';
                } else if (relation[static_cast<std::size_t>(r)] == '>') {
                    relation[static_cast<std::size_t>(r)] = '<';
                }
            }
        }

        // Count artificials: '>' and '=' rows need one.
        int artificial_count = 0;
        for (int r = 0; r < m_; ++r) {
            if (relation[static_cast<std::size_t>(r)] != '<') ++artificial_count;
        }
        const int width = n_total_ + artificial_count + 1;
        t_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(width), 0.0);
        width_ = width;
        basis_.assign(static_cast<std::size_t>(m_), -1);

        int slack = n_structural_;
        int artificial = first_artificial_;
        for (int r = 0; r < m_; ++r) {
            double* row = t_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(width_);
            std::copy(dense[static_cast<std::size_t>(r)].begin(),
                      dense[static_cast<std::size_t>(r)].end(), row);
            row[width_ - 1] = rhs[static_cast<std::size_t>(r)];
            switch (relation[static_cast<std::size_t>(r)]) {
                case '<':
                    row[slack] = 1.0;
                    basis_[static_cast<std::size_t>(r)] = slack++;
                    break;
                case '>':
                    row[slack] = -1.0;
                    ++slack;
                    row[artificial] = 1.0;
                    basis_[static_cast<std::size_t>(r)] = artificial++;
                    break;
                default:
                    row[artificial] = 1.0;
                    basis_[static_cast<std::size_t>(r)] = artificial++;
                    break;
            }
        }
        n_with_artificials_ = artificial;
    }

    double& at(int r, int c) {
        return t_[static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
                  static_cast<std::size_t>(c)];
    }
    double at(int r, int c) const {
        return t_[static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
                  static_cast<std::size_t>(c)];
    }
    double rhs(int r) const { return at(r, width_ - 1); }

    void pivot(int row, int col) {
        double* pr = t_.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(width_);
        const double inv = 1.0 / pr[col];
        for (int c = 0; c < width_; ++c) pr[c] *= inv;
        pr[col] = 1.0;
        for (int r = 0; r < m_; ++r) {
            if (r == row) continue;
            double* other = t_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(width_);
            const double factor = other[col];
            if (factor == 0.0) continue;
            for (int c = 0; c < width_; ++c) other[c] -= factor * pr[c];
            other[col] = 0.0;
        }
        basis_[static_cast<std::size_t>(row)] = col;
    }

    /// Reduced-cost minimization over the given cost vector; columns in
    /// [ban_from, n_with_artificials_) never enter. Returns false on
    /// unboundedness.
    bool run(const std::vector<double>& cost, int ban_from) {
        std::vector<double> reduced(static_cast<std::size_t>(n_with_artificials_));
        long iterations = 0;
        long stalled = 0;
        bool bland = false;
        double last_objective = std::numeric_limits<double>::infinity();
        const long stall_limit = 4L * (m_ + n_with_artificials_);

        while (true) {
            if (++iterations > 400000) throw std::runtime_error("simplex iteration cap exceeded");

            for (int c = 0; c < n_with_artificials_; ++c) {
                reduced[static_cast<std::size_t>(c)] = cost[static_cast<std::size_t>(c)];
            }
            for (int r = 0; r < m_; ++r) {
                const double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
                if (cb == 0.0) continue;
                const double* row =
                    t_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(width_);
                for (int c = 0; c < n_with_artificials_; ++c) {
                    reduced[static_cast<std::size_t>(c)] -= cb * row[c];
                }
            }

            int entering = -1;
            if (!bland) {
                double best = -kReducedCostTol;
                for (int c = 0; c < n_with_artificials_; ++c) {
                    if (c >= ban_from) continue;
                    if (reduced[static_cast<std::size_t>(c)] < best) {
                        best = reduced[static_cast<std::size_t>(c)];
                        entering = c;
                    }
                }
            } else {
                for (int c = 0; c < n_with_artificials_; ++c) {
                    if (c >= ban_from) continue;
                    if (reduced[static_cast<std::size_t>(c)] < -kReducedCostTol) {
                        entering = c;
                        break;
                    }
                }
            }
            if (entering < 0) return true;  // optimal

            int leaving = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m_; ++r) {
                const double a = at(r, entering);
                if (a > kPivotTol) {
                    const double ratio = rhs(r) / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && leaving >= 0 &&
                         basis_[static_cast<std::size_t>(r)] <
                             basis_[static_cast<std::size_t>(leaving)])) {
                        best_ratio = ratio;
                        leaving = r;
                    }
                }
            }
            if (leaving < 0) return false;  // unbounded

            pivot(leaving, entering);

            const double objective = current_objective(cost);
            if (objective >= last_objective - 1e-12) {
                if (++stalled > stall_limit) bland = true;
            } else {
                stalled = 0;
                bland = false;
            }
            last_objective = objective;
        }
    }

    double current_objective(const std::vector<double>& cost) const {
        double v = 0.0;
        for (int r = 0; r < m_; ++r) {
            v += cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] * rhs(r);
        }
        return v;
    }

    /// Pivot basic artificials onto any usable structural/slack column.
    void expel_artificials() {
        for (int r = 0; r < m_; ++r) {
            if (basis_[static_cast<std::size_t>(r)] < first_artificial_) continue;
            int col = -1;
            for (int c = 0; c < first_artificial_; ++c) {
                if (std::abs(at(r, c)) > kPivotTol) {
                    col = c;
                    break;
                }
            }
            // A row with no eligible column is redundant; its artificial
            // stays basic at value zero and is banned from entering.
            if (col >= 0) pivot(r, col);
        }
    }

    int m() const { return m_; }
    int num_structural() const { return n_structural_; }
    int first_artificial() const { return first_artificial_; }
    int total_columns() const { return n_with_artificials_; }
    int basis(int r) const { return basis_[static_cast<std::size_t>(r)]; }

private:
    int m_ = 0;
    int n_structural_ = 0;
    int n_total_ = 0;
    int first_artificial_ = 0;
    int n_with_artificials_ = 0;
    int width_ = 0;
    std::vector<double> t_;
    std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
    Tableau tab(lp);

    // Phase 1: minimize the artificial total.
    std::vector<double> phase1(static_cast<std::size_t>(tab.total_columns()), 0.0);
    for (int c = tab.first_artificial(); c < tab.total_columns(); ++c) {
        phase1[static_cast<std::size_t>(c)] = 1.0;
    }
    if (!tab.run(phase1, tab.total_columns())) {
        throw std::runtime_error("phase-1 objective cannot be unbounded");
    }
    if (tab.current_objective(phase1) > kFeasTol) {
        return LpResult{LpStatus::infeasible, 0.0, {}};
    }
    tab.expel_artificials();

    // Phase 2: artificial columns are banned from entering.
    std::vector<double> phase2(static_cast<std::size_t>(tab.total_columns()), 0.0);
    for (int c = 0; c < lp.num_vars(); ++c) {
        phase2[static_cast<std::size_t>(c)] = lp.objective()[static_cast<std::size_t>(c)];
    }
    if (!tab.run(phase2, tab.first_artificial())) {
        return LpResult{LpStatus::unbounded, 0.0, {}};
    }

    LpResult result;
    result.status = LpStatus::optimal;
    result.value = tab.current_objective(phase2);
    result.solution.assign(static_cast<std::size_t>(lp.num_vars()), 0.0);
    for (int r = 0; r < tab.m(); ++r) {
        const int b = tab.basis(r);
        if (b < lp.num_vars()) result.solution[static_cast<std::size_t>(b)] = tab.rhs(r);
    }
    return result;
}

}  // namespace netlasso
