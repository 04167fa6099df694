#pragma once

// Probability vector over matrix ranks 0..rmax. Construction renormalizes
// inputs whose mass is within 1e-6 of 1 (so Monte-Carlo estimates pass
// through cleanly) and rejects anything worse.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mmc {

class RankDistribution {
public:
    explicit RankDistribution(std::vector<double> probs) : p_(std::move(probs)) {
        if (p_.empty()) throw std::invalid_argument("empty rank distribution");
        double sum = 0.0;
        for (double v : p_) {
            if (!(v >= 0.0)) throw std::invalid_argument("negative rank probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw std::invalid_argument("rank probabilities must sum to 1 within 1e-6");
        for (double& v : p_) v /= sum;
    }

    static RankDistribution point_mass(int r, int rmax) {
        if (r < 0 || r > rmax) throw std::invalid_argument("point mass outside 0..rmax");
        std::vector<double> p(static_cast<std::size_t>(rmax) + 1, 0.0);
        p[static_cast<std::size_t>(r)] = 1.0;
        return RankDistribution(std::move(p));
    }

    int max_rank() const { return static_cast<int>(p_.size()) - 1; }

    // Probability of rank r; zero outside the stored support.
    double operator[](int r) const {
        if (r < 0 || r > max_rank()) return 0.0;
        return p_[static_cast<std::size_t>(r)];
    }

    const std::vector<double>& probs() const { return p_; }

    double mean() const {
        double e = 0.0;
        for (std::size_t r = 0; r < p_.size(); ++r) e += static_cast<double>(r) * p_[r];
        return e;
    }

private:
    std::vector<double> p_;
};

} // namespace mmc
