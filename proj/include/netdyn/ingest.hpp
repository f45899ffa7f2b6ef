#pragma once

// Publication records -> yearly weighted country co-authorship networks.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netdyn/panel.hpp"

namespace netdyn {

enum class Domain { science_tech, social_sciences, arts_humanities, unclassified };

inline constexpr Domain all_domains[] = {Domain::science_tech, Domain::social_sciences,
                                         Domain::arts_humanities, Domain::unclassified};

/// Display label: "S&T", "SocSci", "A&H", "unclassified".
std::string_view domain_label(Domain d);
/// Filename-safe tag: "ST", "SocSci", "AH", "unclassified".
std::string_view domain_tag(Domain d);
/// Accepts either form, case-insensitively.
Domain parse_domain(std::string_view text);

struct ArticleRecord {
    std::string id;
    int year = 0;
    std::vector<Domain> domains;
    std::vector<std::string> raw_affiliations;
};

/// Parses one line of the record file:
///   {"id": "...", "year": 2001, "domain": "S&T" | ["S&T","A&H"], "affiliations": ["..."]}
ArticleRecord parse_record(std::string_view json_line);

enum class UnmatchedPolicy { drop, error };

/// Raw affiliation string -> ISO3 code. Lookup keys are normalised (trimmed,
/// internal whitespace collapsed, ASCII upper-cased). A raw string that already
/// equals an actor code maps to itself without an entry.
class DisambiguationDictionary {
public:
    DisambiguationDictionary(ActorSet actors, UnmatchedPolicy policy = UnmatchedPolicy::drop);

    /// `iso3 == nullopt` flags the name as a known out-of-set country. A code
    /// not in the actor set is rejected.
    void add(std::string_view raw, std::optional<std::string> iso3);

    /// ISO3 code, or nullopt for the out-of-set marker. Throws UnknownNameError
    /// for unmatched names under UnmatchedPolicy::error.
    std::optional<std::string> disambiguate(std::string_view raw) const;

    const ActorSet& actors() const noexcept { return actors_; }
    UnmatchedPolicy policy() const noexcept { return policy_; }
    void set_policy(UnmatchedPolicy p) noexcept { policy_ = p; }
    std::size_t size() const noexcept { return map_.size(); }

    static std::string normalize(std::string_view raw);

private:
    ActorSet actors_;
    UnmatchedPolicy policy_;
    std::unordered_map<std::string, std::optional<std::string>> map_;
};

using CountryPair = std::pair<std::string, std::string>;  // first < second

/// All unordered pairs of the distinct in-set countries on one article.
std::set<CountryPair> expand_pairs(const ArticleRecord& record, const DisambiguationDictionary& dict);

struct YearRange {
    int first = 0;
    int last = 0;
    bool contains(int y) const noexcept { return y >= first && y <= last; }
    int count() const noexcept { return last - first + 1; }
};

/// Running tally of weighted networks keyed by (domain, year). Adding records
/// is commutative and `merge` is elementwise addition, so sharded tallies
/// merged in any order equal a serial pass.
class CoauthorshipTally {
public:
    CoauthorshipTally(const DisambiguationDictionary& dict, YearRange years);

    void add(const ArticleRecord& record);
    void merge(const CoauthorshipTally& other);

    /// Zero network when no record contributed.
    WeightedNetwork network(Domain d, int year) const;
    WeightedNetSeries series(Domain d) const;

    std::size_t records_seen() const noexcept { return seen_; }
    std::size_t skipped_out_of_range() const noexcept { return skipped_; }
    const YearRange& years() const noexcept { return years_; }

private:
    const DisambiguationDictionary* dict_;
    YearRange years_;
    std::map<std::pair<Domain, int>, WeightedNetwork> nets_;
    std::size_t seen_ = 0;
    std::size_t skipped_ = 0;
};

/// Weighted network of one (domain, year) from a record stream.
WeightedNetwork aggregate(std::span<const ArticleRecord> records, const DisambiguationDictionary& dict,
                          Domain domain, int year);

struct DescribeRow {
    int year = 0;
    int nodes = 0;
    std::int64_t edges = 0;
    double density = 0.0;
    int isolates = 0;
};

std::vector<DescribeRow> describe(const BinaryNetSeries& series);
/// Weighted waves are described through their positive-weight support.
std::vector<DescribeRow> describe(const WeightedNetSeries& series);

}  // namespace netdyn
