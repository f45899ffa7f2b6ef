#pragma once

// Actor panels, weighted/binary network waves, covariates, and the few graph
// statistics every other module needs.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netdyn {

/// Ordered, duplicate-free set of actor labels (ISO3 codes). Labels are
/// sorted lexicographically on construction so any two sets built from the
/// same labels index actors identically. Copies share storage.
class ActorSet {
public:
    ActorSet() = default;
    explicit ActorSet(std::vector<std::string> labels);

    int size() const noexcept { return ids_ ? static_cast<int>(ids_->size()) : 0; }
    const std::string& label(int i) const { return ids_->at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& labels() const;
    std::optional<int> index_of(std::string_view label) const;
    bool contains(std::string_view label) const { return index_of(label).has_value(); }

    friend bool operator==(const ActorSet& a, const ActorSet& b);

private:
    std::shared_ptr<const std::vector<std::string>> ids_;
};

/// Symmetric 0/1 adjacency with zero diagonal, stored as packed bit rows so
/// common-neighbour counts are a popcount over the row words.
class Adjacency {
public:
    Adjacency() = default;
    explicit Adjacency(int n);

    int size() const noexcept { return n_; }
    bool has(int i, int j) const noexcept {
        return (bits_[row_offset(i) + static_cast<std::size_t>(j >> 6)] >> (j & 63)) & 1U;
    }
    /// Sets both (i,j) and (j,i). Self-loops are rejected.
    void set(int i, int j, bool on);
    void toggle(int i, int j) { set(i, j, !has(i, j)); }

    int degree(int i) const noexcept { return degree_[static_cast<std::size_t>(i)]; }
    std::span<const int> degrees() const noexcept { return degree_; }
    std::int64_t edge_count() const noexcept { return edges_; }
    int common_neighbors(int i, int j) const noexcept;
    std::vector<int> neighbors(int i) const;

    /// Number of dyads on which two adjacencies of equal size differ.
    std::int64_t hamming(const Adjacency& other) const;

    friend bool operator==(const Adjacency& a, const Adjacency& b) {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

private:
    std::size_t row_offset(int i) const noexcept { return static_cast<std::size_t>(i) * words_; }

    int n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<int> degree_;
    std::int64_t edges_ = 0;
};

/// Co-authorship counts for one year: symmetric, nonnegative, zero diagonal.
class WeightedNetwork {
public:
    WeightedNetwork() = default;
    WeightedNetwork(ActorSet actors, int year);

    const ActorSet& actors() const noexcept { return actors_; }
    int year() const noexcept { return year_; }
    int size() const noexcept { return actors_.size(); }

    std::int64_t weight(int i, int j) const { return w_[cell(i, j)]; }
    void set_weight(int i, int j, std::int64_t w);
    void add_weight(int i, int j, std::int64_t w) { set_weight(i, j, weight(i, j) + w); }

    /// Elementwise sum; both operands must share actors and year.
    WeightedNetwork& operator+=(const WeightedNetwork& other);

    std::int64_t strength(int i) const;
    int positive_degree(int i) const;
    std::int64_t positive_edge_count() const;
    std::int64_t total_weight() const;

    friend bool operator==(const WeightedNetwork& a, const WeightedNetwork& b) {
        return a.year_ == b.year_ && a.actors_ == b.actors_ && a.w_ == b.w_;
    }

private:
    std::size_t cell(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(j);
    }

    ActorSet actors_;
    int year_ = 0;
    std::vector<std::int64_t> w_;
};

/// One observed 0/1 wave.
struct BinaryNetwork {
    ActorSet actors;
    int year = 0;
    Adjacency x;

    BinaryNetwork() = default;
    BinaryNetwork(ActorSet a, int y) : actors(std::move(a)), year(y), x(actors.size()) {}
    BinaryNetwork(ActorSet a, int y, Adjacency adj);

    int size() const noexcept { return x.size(); }
    bool operator==(const BinaryNetwork&) const = default;
};

using WeightedNetSeries = std::vector<WeightedNetwork>;
using BinaryNetSeries = std::vector<BinaryNetwork>;

enum class Transform { none, log1p };

/// Actor-by-period attribute. Missing entries are stored as NaN in the raw
/// table and reported through `missing()`; the grand mean and range are taken
/// over observed entries only, after the transform.
class ActorCovariate {
public:
    ActorCovariate() = default;
    /// `raw` is actor-major (n rows of `periods` values); NaN marks missing.
    ActorCovariate(std::string name, int n, int periods, std::vector<double> raw,
                   Transform transform = Transform::none);

    const std::string& name() const noexcept { return name_; }
    int actors() const noexcept { return n_; }
    int periods() const noexcept { return periods_; }
    Transform transform() const noexcept { return transform_; }

    bool missing(int i, int m) const { return missing_[at(i, m)] != 0; }
    /// Stored (transformed) value; NaN when missing.
    double value(int i, int m) const { return values_[at(i, m)]; }
    /// Grand-mean-centered value; missing entries impute to the mean, so 0.
    double centered(int i, int m) const { return missing(i, m) ? 0.0 : values_[at(i, m)] - grand_mean_; }
    /// Stored value with missing entries replaced by the grand mean.
    double imputed(int i, int m) const { return missing(i, m) ? grand_mean_ : values_[at(i, m)]; }

    double range() const noexcept { return range_; }
    double grand_mean() const noexcept { return grand_mean_; }
    double missing_fraction() const;

private:
    std::size_t at(int i, int m) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(periods_) + static_cast<std::size_t>(m);
    }

    std::string name_;
    int n_ = 0;
    int periods_ = 0;
    std::vector<double> values_;
    std::vector<std::uint8_t> missing_;
    Transform transform_ = Transform::none;
    double range_ = 0.0;
    double grand_mean_ = 0.0;
};

/// Constant dyadic attribute (e.g. log distance). Centered by the mean of the
/// off-diagonal entries.
class DyadCovariate {
public:
    DyadCovariate() = default;
    DyadCovariate(std::string name, int n, std::vector<double> raw, Transform transform = Transform::none);

    const std::string& name() const noexcept { return name_; }
    int actors() const noexcept { return n_; }
    double value(int i, int j) const { return values_[at(i, j)]; }
    double centered(int i, int j) const { return values_[at(i, j)] - mean_; }
    double mean() const noexcept { return mean_; }

private:
    std::size_t at(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    std::string name_;
    int n_ = 0;
    std::vector<double> values_;
    double mean_ = 0.0;
};

std::vector<int> degree_sequence(const BinaryNetwork& net);
std::int64_t edge_count(const BinaryNetwork& net);
/// 2E / (n(n-1)); throws DegenerateInputError for n < 2.
double density(const BinaryNetwork& net);
double density(int n, std::int64_t edges);
int isolate_count(const BinaryNetwork& net);

/// Threshold a weighted wave at w > 0.
BinaryNetwork support(const WeightedNetwork& net);

}  // namespace netdyn
