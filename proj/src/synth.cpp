#include "netdyn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "netdyn/io.hpp"
#include "netdyn/rng.hpp"

namespace netdyn {

namespace {

struct Country {
    const char* iso3;
    std::vector<const char*> names;
};

const std::vector<Country>& countries() {
    static const std::vector<Country> list = {
        {"ARG", {"Argentina"}},
        {"AUS", {"Australia"}},
        {"AUT", {"Austria"}},
        {"BEL", {"Belgium"}},
        {"BRA", {"Brazil", "Brasil"}},
        {"CAN", {"Canada"}},
        {"CHE", {"Switzerland", "Swiss Confederation"}},
        {"CHL", {"Chile"}},
        {"CHN", {"China", "Peoples R China", "People's Republic of China"}},
        {"CZE", {"Czech Republic", "Czechia"}},
        {"DEU", {"Germany", "Fed Rep Ger", "Deutschland"}},
        {"DNK", {"Denmark"}},
        {"EGY", {"Egypt"}},
        {"ESP", {"Spain"}},
        {"FIN", {"Finland"}},
        {"FRA", {"France"}},
        {"GBR", {"United Kingdom", "England", "Scotland", "Wales", "UK"}},
        {"GRC", {"Greece"}},
        {"HUN", {"Hungary"}},
        {"IND", {"India"}},
        {"IRL", {"Ireland", "Irish Republic"}},
        {"IRN", {"Iran", "Islamic Republic of Iran"}},
        {"ISR", {"Israel"}},
        {"ITA", {"Italy"}},
        {"JPN", {"Japan"}},
        {"KOR", {"South Korea", "Korea, Republic of"}},
        {"MEX", {"Mexico"}},
        {"NGA", {"Nigeria"}},
        {"NLD", {"Netherlands", "The Netherlands", "Holland"}},
        {"NOR", {"Norway"}},
        {"NZL", {"New Zealand"}},
        {"POL", {"Poland"}},
        {"PRT", {"Portugal"}},
        {"RUS", {"Russia", "Russian Federation", "USSR"}},
        {"SGP", {"Singapore"}},
        {"SWE", {"Sweden"}},
        {"THA", {"Thailand"}},
        {"TUR", {"Turkey", "Turkiye"}},
        {"USA", {"United States", "USA", "U.S.A.", "United States of America"}},
        {"ZAF", {"South Africa"}},
    };
    return list;
}

double normal(Rng& rng) {
    // Box-Muller, one variate per call
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int pick_weighted(Rng& rng, const std::vector<double>& w) {
    double total = 0.0;
    for (double v : w) total += v;
    double u = uniform01(rng) * total;
    for (std::size_t k = 0; k < w.size(); ++k) {
        u -= w[k];
        if (u < 0.0) return static_cast<int>(k);
    }
    return static_cast<int>(w.size()) - 1;
}

}  // namespace

void write_demo_dataset(const std::filesystem::path& dir, const SynthOptions& options) {
    const auto& list = countries();
    const int n = static_cast<int>(list.size());
    const int years = options.last_year - options.first_year + 1;
    Rng rng(derive_seed(options.seed, {0}));

    std::vector<double> px(n), py(n), productivity(n), afi0(n), drift(n), gdp0(n);
    for (int c = 0; c < n; ++c) {
        px[static_cast<std::size_t>(c)] = uniform01(rng);
        py[static_cast<std::size_t>(c)] = uniform01(rng);
        productivity[static_cast<std::size_t>(c)] = std::exp(1.2 * normal(rng));
        afi0[static_cast<std::size_t>(c)] = std::clamp(0.55 + 0.25 * normal(rng), 0.02, 0.98);
        drift[static_cast<std::size_t>(c)] = 0.01 * normal(rng);
        gdp0[static_cast<std::size_t>(c)] = std::exp(9.5 + 0.8 * normal(rng));
    }
    auto afi = [&](int c, int y) {
        return std::clamp(afi0[static_cast<std::size_t>(c)] + drift[static_cast<std::size_t>(c)] * y, 0.0, 1.0);
    };
    auto dist = [&](int a, int b) {
        return std::hypot(px[static_cast<std::size_t>(a)] - px[static_cast<std::size_t>(b)],
                          py[static_cast<std::size_t>(a)] - py[static_cast<std::size_t>(b)]);
    };

    std::string actors, dictionary = "# policy: drop\n";
    for (const auto& c : list) {
        actors += std::string(c.iso3) + "\n";
        for (const auto* name : c.names) dictionary += fmt::format("{}\t{}\n", name, c.iso3);
    }
    dictionary += "Hong Kong\t-\nPuerto Rico\t-\n";

    std::string afi_csv = "iso3,year,value\n", gdp_csv = "iso3,year,value\n";
    Rng cov_rng(derive_seed(options.seed, {1}));
    for (int c = 0; c < n; ++c) {
        for (int y = 0; y < years; ++y) {
            if (uniform01(cov_rng) >= 0.05)
                afi_csv += fmt::format("{},{},{:.3f}\n", list[static_cast<std::size_t>(c)].iso3, options.first_year + y, afi(c, y));
            gdp_csv += fmt::format("{},{},{:.1f}\n", list[static_cast<std::size_t>(c)].iso3, options.first_year + y,
                                   gdp0[static_cast<std::size_t>(c)] * std::pow(1.03, y));
        }
    }

    std::string distance = "iso3";
    for (const auto& c : list) distance += std::string(",") + c.iso3;
    distance += "\n";
    for (int a = 0; a < n; ++a) {
        distance += list[static_cast<std::size_t>(a)].iso3;
        for (int b = 0; b < n; ++b) distance += fmt::format(",{:.1f}", 10000.0 * dist(a, b));
        distance += "\n";
    }

    std::string records;
    Rng rec_rng(derive_seed(options.seed, {2}));
    const char* domains[] = {"S&T", "SocSci", "A&H"};
    std::size_t id = 0;
    for (int y = 0; y < years; ++y) {
        const int count = static_cast<int>(options.articles_per_year * (1.0 + 0.15 * y));
        std::vector<double> activity(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c)
            activity[static_cast<std::size_t>(c)] = productivity[static_cast<std::size_t>(c)] * std::exp(1.5 * afi(c, y));
        for (int a = 0; a < count; ++a) {
            int k = 2;
            while (k < 5 && uniform01(rec_rng) < 0.3) ++k;
            std::vector<int> members{pick_weighted(rec_rng, activity)};
            while (static_cast<int>(members.size()) < k) {
                std::vector<double> w(static_cast<std::size_t>(n));
                for (int c = 0; c < n; ++c) {
                    double near = 0.0;
                    for (int m : members) near += std::exp(-dist(m, c) / 0.25);
                    w[static_cast<std::size_t>(c)] = activity[static_cast<std::size_t>(c)] * near;
                }
                members.push_back(pick_weighted(rec_rng, w));
            }
            nlohmann::json rec;
            rec["id"] = fmt::format("SYN{:07d}", id++);
            rec["year"] = options.first_year + y;
            const double u = uniform01(rec_rng);
            const int d = u < 0.7 ? 0 : (u < 0.9 ? 1 : 2);
            if (uniform01(rec_rng) < 0.05) rec["domain"] = {domains[d], domains[(d + 1) % 3]};
            else rec["domain"] = domains[d];
            nlohmann::json affs = nlohmann::json::array();
            for (int m : members) {
                const auto& names = list[static_cast<std::size_t>(m)].names;
                affs.push_back(names[static_cast<std::size_t>(uniform_index(rec_rng, static_cast<int>(names.size())))]);
            }
            if (uniform01(rec_rng) < 0.02) affs.push_back("Hong Kong");
            rec["affiliations"] = affs;
            records += rec.dump() + "\n";
        }
    }

    const std::string config = fmt::format(
        "# synthetic demo pipeline\n"
        "records = records.jsonl\n"
        "dictionary = dictionary.tsv\n"
        "actors = actors.txt\n"
        "year_min = {}\n"
        "year_max = {}\n"
        "domains = S&T,SocSci\n"
        "alpha = 0.3\n"
        "alpha_sweep = 0.01,0.05,0.1,0.2,0.3,0.5\n"
        "covariate.afi = afi.csv\n"
        "covariate.gdp = gdp.csv log1p\n"
        "dyadic.dist = distance.csv log1p\n"
        "effects = density, gwesp, degPlus, egoPlusAltX:afi, egoPlusAltSqX:afi, simX:afi, egoPlusAltX:gdp, dyadX:dist\n"
        "tie_rule = forcing\n"
        "n1 = 50\n"
        "subphases = 4\n"
        "n3 = 200\n"
        "gain = 0.2\n"
        "seed = {}\n"
        "gof_max_degree = 8\n"
        "out = out\n",
        options.first_year, options.last_year, options.seed);

    io::write_text(dir / "actors.txt", actors);
    io::write_text(dir / "dictionary.tsv", dictionary);
    io::write_text(dir / "records.jsonl", records);
    io::write_text(dir / "afi.csv", afi_csv);
    io::write_text(dir / "gdp.csv", gdp_csv);
    io::write_text(dir / "distance.csv", distance);
    io::write_text(dir / "demo.cfg", config);
}

}  // namespace netdyn
