#include "netdyn/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>

#include "netdyn/error.hpp"

namespace netdyn {

namespace {

std::string ascii_upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::string_view domain_label(Domain d) {
    switch (d) {
        case Domain::science_tech: return "S&T";
        case Domain::social_sciences: return "SocSci";
        case Domain::arts_humanities: return "A&H";
        case Domain::unclassified: return "unclassified";
    }
    return "unclassified";
}

std::string_view domain_tag(Domain d) {
    switch (d) {
        case Domain::science_tech: return "ST";
        case Domain::social_sciences: return "SocSci";
        case Domain::arts_humanities: return "AH";
        case Domain::unclassified: return "unclassified";
    }
    return "unclassified";
}

Domain parse_domain(std::string_view text) {
    const auto key = ascii_upper(DisambiguationDictionary::normalize(text));
    for (auto d : all_domains)
        if (key == ascii_upper(domain_label(d)) || key == ascii_upper(domain_tag(d))) return d;
    throw ValidationError("unknown research domain: \"" + std::string(text) + "\"");
}

ArticleRecord parse_record(std::string_view json_line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed record: ") + e.what());
    }
    ArticleRecord r;
    try {
        r.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
        r.year = j.at("year").get<int>();
        const auto& dom = j.at("domain");
        if (dom.is_array()) {
            for (const auto& d : dom) r.domains.push_back(parse_domain(d.get<std::string>()));
        } else {
            r.domains.push_back(parse_domain(dom.get<std::string>()));
        }
        for (const auto& a : j.at("affiliations")) r.raw_affiliations.push_back(a.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("record is missing a field or has a wrong type: ") + e.what());
    }
    std::sort(r.domains.begin(), r.domains.end());
    r.domains.erase(std::unique(r.domains.begin(), r.domains.end()), r.domains.end());
    if (r.raw_affiliations.empty()) throw ValidationError("record " + r.id + " has no affiliations");
    return r;
}

// ---------------------------------------------------------------------------

DisambiguationDictionary::DisambiguationDictionary(ActorSet actors, UnmatchedPolicy policy)
    : actors_(std::move(actors)), policy_(policy) {}

std::string DisambiguationDictionary::normalize(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

void DisambiguationDictionary::add(std::string_view raw, std::optional<std::string> iso3) {
    auto key = normalize(raw);
    if (key.empty()) throw ValidationError("empty raw name in disambiguation dictionary");
    if (iso3 && !actors_.contains(*iso3))
        throw ValidationError("dictionary maps \"" + std::string(raw) + "\" to " + *iso3 +
                              ", which is not in the actor set (flag it as out-of-set instead)");
    map_[std::move(key)] = std::move(iso3);
}

std::optional<std::string> DisambiguationDictionary::disambiguate(std::string_view raw) const {
    const auto key = normalize(raw);
    if (auto it = map_.find(key); it != map_.end()) return it->second;
    if (actors_.contains(key)) return key;
    if (policy_ == UnmatchedPolicy::error) throw UnknownNameError(std::string(raw));
    return std::nullopt;
}

std::set<CountryPair> expand_pairs(const ArticleRecord& record, const DisambiguationDictionary& dict) {
    std::vector<std::string> codes;
    for (const auto& raw : record.raw_affiliations)
        if (auto code = dict.disambiguate(raw)) codes.push_back(std::move(*code));
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    std::set<CountryPair> pairs;
    for (std::size_t a = 0; a < codes.size(); ++a)
        for (std::size_t b = a + 1; b < codes.size(); ++b) pairs.emplace(codes[a], codes[b]);
    return pairs;
}

// ---------------------------------------------------------------------------

CoauthorshipTally::CoauthorshipTally(const DisambiguationDictionary& dict, YearRange years)
    : dict_(&dict), years_(years) {
    if (years.last < years.first) throw ConfigError("year range is empty");
}

void CoauthorshipTally::add(const ArticleRecord& record) {
    ++seen_;
    if (!years_.contains(record.year)) {
        ++skipped_;
        return;
    }
    const auto pairs = expand_pairs(record, *dict_);
    if (pairs.empty()) return;
    const auto& actors = dict_->actors();
    for (auto d : record.domains) {
        auto [it, fresh] = nets_.try_emplace({d, record.year}, actors, record.year);
        for (const auto& [a, b] : pairs) it->second.add_weight(*actors.index_of(a), *actors.index_of(b), 1);
    }
}

void CoauthorshipTally::merge(const CoauthorshipTally& other) {
    if (!(other.dict_->actors() == dict_->actors())) throw ValidationError("cannot merge tallies over different actors");
    for (const auto& [key, net] : other.nets_) {
        auto [it, fresh] = nets_.try_emplace(key, net.actors(), net.year());
        it->second += net;
    }
    seen_ += other.seen_;
    skipped_ += other.skipped_;
}

WeightedNetwork CoauthorshipTally::network(Domain d, int year) const {
    if (auto it = nets_.find({d, year}); it != nets_.end()) return it->second;
    return WeightedNetwork(dict_->actors(), year);
}

WeightedNetSeries CoauthorshipTally::series(Domain d) const {
    WeightedNetSeries out;
    for (int y = years_.first; y <= years_.last; ++y) out.push_back(network(d, y));
    return out;
}

WeightedNetwork aggregate(std::span<const ArticleRecord> records, const DisambiguationDictionary& dict,
                          Domain domain, int year) {
    CoauthorshipTally tally(dict, {year, year});
    for (const auto& r : records) tally.add(r);
    return tally.network(domain, year);
}

// ---------------------------------------------------------------------------

std::vector<DescribeRow> describe(const BinaryNetSeries& series) {
    std::vector<DescribeRow> rows;
    rows.reserve(series.size());
    for (const auto& net : series) {
        DescribeRow r;
        r.year = net.year;
        r.nodes = net.size();
        r.edges = edge_count(net);
        r.density = net.size() >= 2 ? density(net) : 0.0;
        r.isolates = isolate_count(net);
        rows.push_back(r);
    }
    return rows;
}

std::vector<DescribeRow> describe(const WeightedNetSeries& series) {
    BinaryNetSeries supports;
    supports.reserve(series.size());
    for (const auto& w : series) supports.push_back(support(w));
    return describe(supports);
}

}  // namespace netdyn
