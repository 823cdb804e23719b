#include "abelwave/spline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "abelwave/error.hpp"

namespace abelwave {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw ConfigError("cubic spline needs at least 3 matching samples");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) throw ConfigError("spline abscissae must be strictly increasing");
    }
    // Tridiagonal system for the interior second derivatives (natural ends).
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // Thomas algorithm on rows 1..n-2; lower off-diagonal of row i is h_{i-1}.
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double lower = x_[i] - x_[i - 1];
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        const double next = (i + 2 < n) ? m_[i + 1] : 0.0;
        m_[i] = (rhs[i] - upper[i] * next) / diag[i];
        if (i == 1) break;
    }
    cumulative_.assign(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = x_[k + 1] - x_[k];
        cumulative_[k + 1] = cumulative_[k] + 0.5 * h * (y_[k] + y_[k + 1]) -
                             h * h * h * (m_[k] + m_[k + 1]) / 24.0;
    }
}

std::size_t CubicSpline::segment(double x) const {
    if (x < x_.front() - 1e-12 || x > x_.back() + 1e-12) {
        throw DomainError("spline evaluated outside [" + std::to_string(x_.front()) + ", " +
                          std::to_string(x_.back()) + "] at " + std::to_string(x));
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(k, x_.size() - 2);
}

double CubicSpline::operator()(double x) const {
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h, b = (x - x_[k]) / h;
    return a * y_[k] + b * y_[k + 1] +
           ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h, b = (x - x_[k]) / h;
    return (y_[k + 1] - y_[k]) / h + ((1.0 - 3.0 * a * a) * m_[k] + (3.0 * b * b - 1.0) * m_[k + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h, b = (x - x_[k]) / h;
    return a * m_[k] + b * m_[k + 1];
}

double CubicSpline::integral(double x) const {
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h, b = (x - x_[k]) / h;
    // Antiderivative of the segment polynomial in the variable b, from 0 to b.
    const double a2 = a * a, b2 = b * b;
    const double lin = h * (y_[k] * (1.0 - a2) / 2.0 + y_[k + 1] * b2 / 2.0);
    const double cub = h * h * h / 6.0 *
                       (m_[k] * (-(a2 * a2) / 4.0 + a2 / 2.0 - 0.25) + m_[k + 1] * (b2 * b2 / 4.0 - b2 / 2.0));
    return cumulative_[k] + lin + cub;
}

std::vector<std::vector<double>> read_csv_columns(const std::string& path, std::size_t columns) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
    std::vector<std::vector<double>> out(columns);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::vector<double> row(columns);
        bool ok = true;
        for (auto& v : row) ok = ok && static_cast<bool>(fields >> v);
        if (!ok) {
            if (out[0].empty() && line_no == 1) continue;  // header
            throw ConfigError("malformed CSV row in '" + path + "'", line_no);
        }
        for (std::size_t c = 0; c < columns; ++c) out[c].push_back(row[c]);
    }
    if (out[0].size() < 3) throw ConfigError("CSV file '" + path + "' needs at least 3 rows");
    return out;
}

CsvColumns read_two_column_csv(const std::string& path) {
    auto cols = read_csv_columns(path, 2);
    return {std::move(cols[0]), std::move(cols[1])};
}

}  // namespace abelwave
