#pragma once

#include <utility>
#include <vector>

namespace netlasso {

/// Minimize c^T v subject to sparse rows (<=, >=, =) and v >= 0.
/// Free variables are the caller's job (split into a difference of two).
class LinearProgram {
public:
    int add_variable(double cost) {
        objective_.push_back(cost);
        return static_cast<int>(objective_.size()) - 1;
    }

    /// relation is one of '<' (<=), '>' (>=), '=' (==).
    void add_row(std::vector<std::pair<int, double>> terms, char relation, double rhs) {
        rows_.push_back(Row{std::move(terms), relation, rhs});
    }

    int num_vars() const { return static_cast<int>(objective_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }

    struct Row {
        std::vector<std::pair<int, double>> terms;
        char relation;
        double rhs;
    };
    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<double>& objective() const { return objective_; }

private:
    std::vector<double> objective_;
    std::vector<Row> rows_;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::vector<double> solution;  // structural variables only
};

/// Dense two-phase simplex. Dantzig pricing with a Bland fallback after a
/// stall, pivot tolerance 1e-10.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace netlasso
