#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace abelwave {

/// Natural cubic spline through (x_i, y_i) with analytic derivatives.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    /// ∫ from lower() to x.
    double integral(double x) const;

    double lower() const { return x_.front(); }
    double upper() const { return x_.back(); }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
    std::vector<double> cumulative_;  // integral up to each knot
};

/// Two-column numeric CSV (header line optional); returns the columns.
struct CsvColumns {
    std::vector<double> first;
    std::vector<double> second;
};
CsvColumns read_two_column_csv(const std::string& path);

/// Numeric CSV with at least `columns` fields per row (header line optional).
std::vector<std::vector<double>> read_csv_columns(const std::string& path, std::size_t columns);

}  // namespace abelwave
