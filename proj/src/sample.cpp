#include "kac/sample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kac {

EmpiricalSample::EmpiricalSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("EmpiricalSample: empty sample");
    std::sort(values_.begin(), values_.end());
}

double EmpiricalSample::moment(double r) const {
    double acc = 0.0;
    for (double x : values_) acc += std::pow(std::abs(x), r);
    return acc / static_cast<double>(values_.size());
}

double EmpiricalSample::mean() const {
    double acc = 0.0;
    for (double x : values_) acc += x;
    return acc / static_cast<double>(values_.size());
}

} // namespace kac
