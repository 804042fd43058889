#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

namespace plq {

/// A lattice site addressed by horizontal (x) and vertical (y) coordinate.
/// The canonical site order is column-major: x first, then y, so operators
/// built on a sorted support are reproducible across runs.
struct Site {
    int x = 0;
    int y = 0;
    auto operator<=>(const Site&) const = default;
};

using SiteList = std::vector<Site>;

inline SiteList sorted_sites(SiteList s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline bool contains_site(const SiteList& sorted, Site s) {
    return std::binary_search(sorted.begin(), sorted.end(), s);
}

inline bool is_subset(const SiteList& sub, const SiteList& sorted_super) {
    for (const Site& s : sub)
        if (!contains_site(sorted_super, s)) return false;
    return true;
}

/// Union of two sorted site lists, canonical order.
inline SiteList site_union(const SiteList& a, const SiteList& b) {
    SiteList out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline SiteList site_difference(const SiteList& a, const SiteList& b) {
    SiteList out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline SiteList site_intersection(const SiteList& a, const SiteList& b) {
    SiteList out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool sites_disjoint(const SiteList& a, const SiteList& b) {
    return site_intersection(a, b).empty();
}

/// The four sites of the unit plaquette whose lower-left corner is (x, y).
inline SiteList plaquette_sites(int x, int y) {
    return {{x, y}, {x, y + 1}, {x + 1, y}, {x + 1, y + 1}};
}

/// Converts between flat matrix indices and per-site digit tuples for a
/// tensor-product space. The first site in the list is the most significant
/// digit, matching kron(A_first, ..., A_last).
class SiteIndexer {
  public:
    SiteIndexer() = default;
    explicit SiteIndexer(std::vector<long> dims) : dims_(std::move(dims)) {
        strides_.assign(dims_.size(), 1);
        total_ = 1;
        for (int k = static_cast<int>(dims_.size()) - 1; k >= 0; --k) {
            if (dims_[k] <= 0) throw std::domain_error("SiteIndexer: nonpositive dimension");
            strides_[k] = total_;
            total_ *= dims_[k];
        }
    }

    long total() const { return total_; }
    std::size_t rank() const { return dims_.size(); }
    long dim(std::size_t k) const { return dims_[k]; }
    long stride(std::size_t k) const { return strides_[k]; }
    const std::vector<long>& dims() const { return dims_; }

    long digit(long flat, std::size_t k) const { return (flat / strides_[k]) % dims_[k]; }

    void decode(long flat, std::vector<long>& digits) const {
        digits.resize(dims_.size());
        for (std::size_t k = 0; k < dims_.size(); ++k) digits[k] = digit(flat, k);
    }

    long encode(const std::vector<long>& digits) const {
        long flat = 0;
        for (std::size_t k = 0; k < dims_.size(); ++k) flat += digits[k] * strides_[k];
        return flat;
    }

  private:
    std::vector<long> dims_;
    std::vector<long> strides_;
    long total_ = 1;
};

}  // namespace plq
