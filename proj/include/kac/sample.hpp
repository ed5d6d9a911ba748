#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kac {

// A real sample kept sorted; the sorted order is the optimal monotone
// coupling on the line, which is what every W2 computation here uses.
class EmpiricalSample {
public:
    EmpiricalSample() = default;
    explicit EmpiricalSample(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    double moment(double r) const;   // (1/k) Σ |x_i|^r
    double mean() const;

private:
    std::vector<double> values_;
};

} // namespace kac
