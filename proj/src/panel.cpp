#include "netdyn/panel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "netdyn/error.hpp"

namespace netdyn {

ActorSet::ActorSet(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    if (auto dup = std::adjacent_find(labels.begin(), labels.end()); dup != labels.end())
        throw ValidationError("duplicate actor label: " + *dup);
    for (const auto& l : labels)
        if (l.empty()) throw ValidationError("empty actor label");
    ids_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

const std::vector<std::string>& ActorSet::labels() const {
    static const std::vector<std::string> empty;
    return ids_ ? *ids_ : empty;
}

std::optional<int> ActorSet::index_of(std::string_view label) const {
    if (!ids_) return std::nullopt;
    auto it = std::lower_bound(ids_->begin(), ids_->end(), label);
    if (it == ids_->end() || *it != label) return std::nullopt;
    return static_cast<int>(it - ids_->begin());
}

bool operator==(const ActorSet& a, const ActorSet& b) {
    if (a.ids_ == b.ids_) return true;
    return a.labels() == b.labels();
}

// ---------------------------------------------------------------------------

Adjacency::Adjacency(int n)
    : n_(n),
      words_(static_cast<std::size_t>((n + 63) / 64)),
      bits_(static_cast<std::size_t>(n) * words_, 0),
      degree_(static_cast<std::size_t>(n), 0) {
    if (n < 0) throw ValidationError("negative network size");
}

void Adjacency::set(int i, int j, bool on) {
    if (i == j) throw ValidationError("self-loop at actor " + std::to_string(i));
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("adjacency index out of range");
    if (has(i, j) == on) return;
    const auto bi = std::uint64_t{1} << (j & 63);
    const auto bj = std::uint64_t{1} << (i & 63);
    bits_[row_offset(i) + static_cast<std::size_t>(j >> 6)] ^= bi;
    bits_[row_offset(j) + static_cast<std::size_t>(i >> 6)] ^= bj;
    const int d = on ? 1 : -1;
    degree_[static_cast<std::size_t>(i)] += d;
    degree_[static_cast<std::size_t>(j)] += d;
    edges_ += d;
}

int Adjacency::common_neighbors(int i, int j) const noexcept {
    const auto* a = bits_.data() + row_offset(i);
    const auto* b = bits_.data() + row_offset(j);
    int c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += std::popcount(a[w] & b[w]);
    return c;
}

std::vector<int> Adjacency::neighbors(int i) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(degree(i)));
    const auto* row = bits_.data() + row_offset(i);
    for (std::size_t w = 0; w < words_; ++w) {
        auto word = row[w];
        while (word) {
            const int b = std::countr_zero(word);
            out.push_back(static_cast<int>(w * 64) + b);
            word &= word - 1;
        }
    }
    return out;
}

std::int64_t Adjacency::hamming(const Adjacency& other) const {
    if (other.n_ != n_) throw ValidationError("hamming distance between networks of different size");
    std::int64_t total = 0;
    for (std::size_t k = 0; k < bits_.size(); ++k) total += std::popcount(bits_[k] ^ other.bits_[k]);
    return total / 2;
}

// ---------------------------------------------------------------------------

WeightedNetwork::WeightedNetwork(ActorSet actors, int year)
    : actors_(std::move(actors)),
      year_(year),
      w_(static_cast<std::size_t>(actors_.size()) * static_cast<std::size_t>(actors_.size()), 0) {}

void WeightedNetwork::set_weight(int i, int j, std::int64_t w) {
    if (i == j) throw ValidationError("co-authorship weight on the diagonal");
    if (w < 0) throw ValidationError("negative co-authorship weight");
    w_.at(cell(i, j)) = w;
    w_.at(cell(j, i)) = w;
}

WeightedNetwork& WeightedNetwork::operator+=(const WeightedNetwork& other) {
    if (!(other.actors_ == actors_) || other.year_ != year_)
        throw ValidationError("cannot merge weighted networks over different actors or years");
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] += other.w_[k];
    return *this;
}

std::int64_t WeightedNetwork::strength(int i) const {
    std::int64_t s = 0;
    for (int j = 0; j < size(); ++j) s += weight(i, j);
    return s;
}

int WeightedNetwork::positive_degree(int i) const {
    int k = 0;
    for (int j = 0; j < size(); ++j) k += weight(i, j) > 0;
    return k;
}

std::int64_t WeightedNetwork::positive_edge_count() const {
    std::int64_t e = 0;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j) e += weight(i, j) > 0;
    return e;
}

std::int64_t WeightedNetwork::total_weight() const {
    std::int64_t t = 0;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j) t += weight(i, j);
    return t;
}

BinaryNetwork::BinaryNetwork(ActorSet a, int y, Adjacency adj) : actors(std::move(a)), year(y), x(std::move(adj)) {
    if (x.size() != actors.size()) throw ValidationError("adjacency size does not match actor set");
}

// ---------------------------------------------------------------------------

ActorCovariate::ActorCovariate(std::string name, int n, int periods, std::vector<double> raw, Transform transform)
    : name_(std::move(name)), n_(n), periods_(periods), values_(std::move(raw)), transform_(transform) {
    if (n <= 0 || periods <= 0) throw ValidationError("covariate " + name_ + ": empty dimensions");
    if (values_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(periods))
        throw ValidationError("covariate " + name_ + ": value table has wrong size");
    missing_.assign(values_.size(), 0);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    std::size_t observed = 0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        double& v = values_[k];
        if (std::isnan(v)) {
            missing_[k] = 1;
            continue;
        }
        if (transform_ == Transform::log1p) {
            if (v <= -1.0) throw ValidationError("covariate " + name_ + ": log(x+1) of value <= -1");
            v = std::log1p(v);
        }
        if (!std::isfinite(v)) throw ValidationError("covariate " + name_ + ": non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
        ++observed;
    }
    if (observed == 0) throw ValidationError("covariate " + name_ + ": no observed values");
    grand_mean_ = sum / static_cast<double>(observed);
    range_ = hi - lo;
}

double ActorCovariate::missing_fraction() const {
    std::size_t m = 0;
    for (auto f : missing_) m += f;
    return static_cast<double>(m) / static_cast<double>(missing_.size());
}

DyadCovariate::DyadCovariate(std::string name, int n, std::vector<double> raw, Transform transform)
    : name_(std::move(name)), n_(n), values_(std::move(raw)) {
    if (values_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw ValidationError("dyadic covariate " + name_ + ": matrix has wrong size");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double& v = values_[at(i, j)];
            if (transform == Transform::log1p) {
                if (v <= -1.0) throw ValidationError("dyadic covariate " + name_ + ": log(x+1) of value <= -1");
                v = std::log1p(v);
            }
            if (!std::isfinite(v)) throw ValidationError("dyadic covariate " + name_ + ": non-finite value");
            if (i != j) sum += v;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (values_[at(i, j)] != values_[at(j, i)])
                throw ValidationError("dyadic covariate " + name_ + ": matrix is not symmetric");
    mean_ = n > 1 ? sum / (static_cast<double>(n) * (n - 1)) : 0.0;
}

// ---------------------------------------------------------------------------

std::vector<int> degree_sequence(const BinaryNetwork& net) {
    auto d = net.x.degrees();
    return {d.begin(), d.end()};
}

std::int64_t edge_count(const BinaryNetwork& net) { return net.x.edge_count(); }

double density(int n, std::int64_t edges) {
    if (n < 2) throw DegenerateInputError("density needs at least two actors");
    return 2.0 * static_cast<double>(edges) / (static_cast<double>(n) * (n - 1));
}

double density(const BinaryNetwork& net) { return density(net.size(), net.x.edge_count()); }

int isolate_count(const BinaryNetwork& net) {
    auto d = net.x.degrees();
    return static_cast<int>(std::count(d.begin(), d.end(), 0));
}

BinaryNetwork support(const WeightedNetwork& net) {
    BinaryNetwork out(net.actors(), net.year());
    for (int i = 0; i < net.size(); ++i)
        for (int j = i + 1; j < net.size(); ++j)
            if (net.weight(i, j) > 0) out.x.set(i, j, true);
    return out;
}

}  // namespace netdyn
