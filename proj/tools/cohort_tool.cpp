#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cohorts/analysis.hpp"
#include "cohorts/arch_system.hpp"
#include "cohorts/bijections.hpp"
#include "cohorts/canonical.hpp"
#include "cohorts/census.hpp"
#include "cohorts/containment.hpp"
#include "cohorts/gf.hpp"
#include "cohorts/series.hpp"

using nlohmann::ordered_json;
using namespace cohorts;

namespace {

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

ordered_json coeff_array(const Series& s) {
    ordered_json a = ordered_json::array();
    for (const std::string& c : s.coeff_strings()) a.push_back(c);
    return a;
}

// ---- census cache --------------------------------------------------------

std::string resolve_cache_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("CATALAN_COHORTS_CACHE"); env && *env) return env;
    if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg && *xdg)
        return std::string(xdg) + "/catalan-cohorts";
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::string(home) + "/.local/share/catalan-cohorts";
    return ".catalan-cohorts";
}

std::filesystem::path cache_file(const std::string& dir, int n) {
    return std::filesystem::path(dir) / ("census_" + std::to_string(n) + ".jsonl");
}

// A cached census counts only when its trailer totals check out; anything
// partial or stale is recomputed from scratch and atomically replaced.
std::optional<std::vector<CohortRow>> load_census(const std::filesystem::path& file, int n) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    std::vector<CohortRow> rows;
    mpz_class members = 0;
    bool sealed = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || j.value("n", -1) != n) return std::nullopt;
        if (j.value("trailer", false)) {
            if (sealed) return std::nullopt;
            mpz_class want_rows(j.value("cohorts", std::string("-1")));
            mpz_class want_members(j.value("members", std::string("-1")));
            if (want_rows != mpz_class(static_cast<unsigned long>(rows.size()))) return std::nullopt;
            if (want_members != members) return std::nullopt;
            sealed = true;
            continue;
        }
        if (sealed || !j.contains("key") || !j.contains("rep") || !j.contains("count"))
            return std::nullopt;
        CohortRow row;
        row.key = form_from_string(j["key"].get<std::string>());
        row.rep = j["rep"].get<std::string>();
        mpz_class cnt(j["count"].get<std::string>());
        if (cnt < 1 || !cnt.fits_ulong_p()) return std::nullopt;
        row.count = cnt.get_ui();
        members += cnt;
        rows.push_back(std::move(row));
    }
    if (!sealed) return std::nullopt;
    if (n <= 35 && members != mpz_class(catalan_u64(n))) return std::nullopt;
    return rows;
}

void store_census(const std::filesystem::path& file, int n,
                  const std::vector<CohortRow>& rows) {
    std::filesystem::create_directories(file.parent_path());
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        mpz_class members = 0;
        for (const CohortRow& row : rows) {
            ordered_json j{{"n", n},
                           {"key", form_to_string(row.key)},
                           {"count", std::to_string(row.count)},
                           {"rep", row.rep}};
            out << j.dump() << "\n";
            members += row.count;
        }
        ordered_json trailer{{"n", n},
                             {"trailer", true},
                             {"cohorts", std::to_string(rows.size())},
                             {"members", members.get_str()}};
        out << trailer.dump() << "\n";
    }
    std::filesystem::rename(tmp, file);
}

// ---- subcommand bodies ---------------------------------------------------

int run_enumerate(int n, bool csv) {
    if (n > 15) throw std::invalid_argument("enumerate caps at n = 15; use the stream API beyond");
    std::vector<std::string> words = enumerate_all(n);
    if (csv) {
        for (const std::string& w : words) std::cout << w << "\n";
        return 0;
    }
    ordered_json j{{"n", n}, {"count", std::to_string(words.size())}};
    j["words"] = words;
    emit(j);
    return 0;
}

ArchSystem read_as(const std::string& format, const std::string& text) {
    if (format == "arches") return parse(text);
    if (format == "dyck") {
        std::string steps = text;
        for (char& c : steps) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return from_dyck(DyckPath{steps});
    }
    if (format == "forest") return from_forest(forest_from_string(text));
    return from_perm(perm_from_string(text));
}

std::string write_as(const std::string& format, const ArchSystem& sys) {
    if (format == "arches") return render(sys);
    if (format == "dyck") return to_dyck(sys).steps;
    if (format == "forest") return forest_to_string(to_forest(sys));
    return perm_to_string(to_perm(sys));
}

int run_convert(const std::string& from, const std::string& to, const std::string& text) {
    ArchSystem sys = read_as(from, text);
    emit({{"from", from}, {"to", to}, {"input", text}, {"output", write_as(to, sys)}});
    return 0;
}

int run_contains(const std::string& host, const std::string& pattern) {
    bool c = contains(parse(host), parse(pattern));
    emit({{"host", host}, {"pattern", pattern}, {"contains", c}});
    return 0;
}

int run_gf(const std::string& word, int degree, bool brute, bool csv) {
    ArchSystem pattern = parse(word);
    Series s(degree);
    if (brute) {
        for (int m = 0; m <= degree; ++m)
            s.set_coeff(m, mpz_class(static_cast<unsigned long>(count_avoiders(pattern, m))));
    } else {
        s = gf_avoid(pattern, degree);
    }
    if (csv) {
        std::cout << "degree,avoiders\n";
        for (int m = 0; m <= degree; ++m) std::cout << m << ',' << s.coeff(m).get_str() << "\n";
        return 0;
    }
    emit({{"pattern", word},
          {"degree", degree},
          {"engine", brute ? "brute" : "series"},
          {"coefficients", coeff_array(s)}});
    return 0;
}

int run_key(const std::string& word) {
    ArchSystem sys = parse(word);
    AtomicForm key = cohort_key(sys);
    emit({{"system", word},
          {"size", system_size(sys)},
          {"key", form_to_string(key)},
          {"main", is_main_key(key)}});
    return 0;
}

int run_census(int n, const std::string& cache_flag, int gf_degree, bool csv) {
    std::string dir = resolve_cache_dir(cache_flag);
    std::filesystem::path file = cache_file(dir, n);
    bool cached = true;
    std::vector<CohortRow> rows;
    if (auto loaded = load_census(file, n)) {
        rows = std::move(*loaded);
    } else {
        cached = false;
        rows = census(n);
        store_census(file, n, rows);
    }
    std::vector<Series> gfs;
    if (gf_degree >= 0)
        for (const CohortRow& row : rows) gfs.push_back(gf_avoid(parse(row.rep), gf_degree));

    if (csv) {
        std::cout << (gf_degree >= 0 ? "key,rep,count,gf\n" : "key,rep,count\n");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::cout << '"' << form_to_string(rows[i].key) << "\"," << rows[i].rep << ','
                      << rows[i].count;
            if (gf_degree >= 0) {
                std::cout << ",\"";
                for (int m = 0; m <= gf_degree; ++m)
                    std::cout << (m ? " " : "") << gfs[i].coeff(m).get_str();
                std::cout << '"';
            }
            std::cout << "\n";
        }
        return 0;
    }
    mpz_class members = 0;
    for (const CohortRow& row : rows) members += row.count;
    ordered_json jrows = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ordered_json j{{"key", form_to_string(rows[i].key)},
                       {"rep", rows[i].rep},
                       {"count", std::to_string(rows[i].count)}};
        if (gf_degree >= 0) j["gf"] = coeff_array(gfs[i]);
        jrows.push_back(std::move(j));
    }
    emit({{"n", n},
          {"cohorts", std::to_string(rows.size())},
          {"members", members.get_str()},
          {"cache", file.string()},
          {"cached", cached},
          {"rows", std::move(jrows)}});
    return 0;
}

int run_cohort_series(int degree, bool csv) {
    auto [atomic, large] = cohort_series_pair(degree);
    if (csv) {
        std::cout << "degree,atomic,large\n";
        for (int m = 0; m <= degree; ++m)
            std::cout << m << ',' << atomic.coeff(m).get_str() << ','
                      << large.coeff(m).get_str() << "\n";
        return 0;
    }
    emit({{"degree", degree},
          {"coefficients", coeff_array(atomic)},
          {"large_layer", coeff_array(large)}});
    return 0;
}

int run_motzkin_check(int n, bool csv) {
    Series motz = motzkin_atom_series(n + 1);
    bool pass = true;
    ordered_json rows = ordered_json::array();
    std::ostringstream table;
    table << "n,key,census,motzkin,equal\n";
    for (int k = 1; k <= n; ++k) {
        mpz_class from_census = 0;
        for (const CohortRow& row : census(k))
            if (is_main_key(row.key)) from_census = mpz_class(static_cast<unsigned long>(row.count));
        mpz_class expect = motz.coeff(k + 1);
        bool eq = from_census == expect;
        pass = pass && eq;
        rows.push_back({{"n", k},
                        {"key", form_to_string(main_key(k))},
                        {"census", from_census.get_str()},
                        {"motzkin", expect.get_str()},
                        {"equal", eq}});
        table << k << ",\"" << form_to_string(main_key(k)) << "\"," << from_census.get_str()
              << ',' << expect.get_str() << ',' << (eq ? "true" : "false") << "\n";
    }
    if (csv)
        std::cout << table.str();
    else
        emit({{"n", n}, {"pass", pass}, {"rows", std::move(rows)}});
    return pass ? 0 : 1;
}

int run_singletons(int n, bool csv) {
    Series s = singleton_series(n);
    bool pass = true;
    ordered_json rows = ordered_json::array();
    std::ostringstream table;
    table << "n,recurrence,census,equal\n";
    for (int k = 1; k <= n; ++k) {
        std::uint64_t seen = 0;
        for_each_word(k, [&](const std::string& w) {
            if (is_singleton(parse(w))) ++seen;
        });
        bool eq = s.coeff(k) == mpz_class(static_cast<unsigned long>(seen));
        pass = pass && eq;
        rows.push_back({{"n", k},
                        {"recurrence", s.coeff(k).get_str()},
                        {"census", std::to_string(seen)},
                        {"equal", eq}});
        table << k << ',' << s.coeff(k).get_str() << ',' << seen << ','
              << (eq ? "true" : "false") << "\n";
    }
    if (csv)
        std::cout << table.str();
    else
        emit({{"n", n}, {"pass", pass}, {"rows", std::move(rows)}});
    return pass ? 0 : 1;
}

int run_verify(const std::string& which, int n, int degree, bool csv) {
    VerificationReport r;
    if (which == "refinement")
        r = verify_refinement(n, degree);
    else if (which == "strong")
        r = verify_strong_conjecture(n);
    else
        r = verify_dominance(n, degree < 0 ? std::max(24, 2 * n) : degree);
    std::cout << (csv ? report_to_csv(r) : report_to_json(r) + "\n");
    return r.pass ? 0 : 1;
}

int run_family(int n) {
    auto [a, b] = counterexample_family(n);
    int cap = 2 * n - 2;
    Series ga = gf_avoid(a, cap), gb = gf_avoid(b, cap);
    int d = 0;
    while (d <= cap && ga.coeff(d) == gb.coeff(d)) ++d;
    emit({{"n", n},
          {"a", render(a)},
          {"b", render(b)},
          {"keys_differ", !(cohort_key(a) == cohort_key(b))},
          {"first_difference", d > cap ? -1 : d},
          {"expected_difference", cap},
          {"a_count_there", ga.coeff(std::min(d, cap)).get_str()},
          {"b_count_there", gb.coeff(std::min(d, cap)).get_str()}});
    return 0;
}

int run_bijection(const std::string& wa, const std::string& wb, int verify_to) {
    ArchSystem a = parse(wa), b = parse(wb);
    std::optional<BijectionPath> path = find_path(a, b);
    if (!path) {
        emit({{"found", false}, {"start", wa}, {"end", wb}});
        return 1;
    }
    ordered_json moves = ordered_json::array();
    for (const Move& m : path->moves) moves.push_back(move_to_string(m));
    ordered_json j{{"found", true},
                   {"start", path->start},
                   {"end", path->end},
                   {"moves", std::move(moves)},
                   {"states", path->states},
                   {"map", path_bijection(*path)->describe()}};
    int rc = 0;
    if (verify_to >= 0) {
        PathVerification v = verify_path(*path, verify_to);
        ordered_json sizes = ordered_json::array();
        for (const SizeCheck& s : v.sizes) {
            sizes.push_back({{"host_size", s.host_size},
                             {"domain", std::to_string(s.domain_count)},
                             {"image", std::to_string(s.image_count)},
                             {"total", s.total},
                             {"image_avoids", s.image_ok},
                             {"injective", s.injective},
                             {"counts_equal", s.counts_equal},
                             {"witness", s.witness}});
        }
        j["verification"] = {{"pass", v.pass}, {"sizes", std::move(sizes)}};
        rc = v.pass ? 0 : 1;
    }
    emit(j);
    return rc;
}

int run_growth(int degree) {
    GrowthEstimate g = growth_rate_estimate(degree);
    emit({{"degree", degree},
          {"gamma", g.gamma},
          {"c", g.c},
          {"window", {g.window_lo, g.window_hi}}});
    return 0;
}

int run_radius(int approx_degree) {
    RadiusEstimate r = radius_estimate(approx_degree);
    emit({{"approx_degree", approx_degree},
          {"rho", r.rho},
          {"inv_rho", r.inv_rho},
          {"fyy_at_root", r.fyy_at_root}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arch system cohorts: equivalence classes, censuses, avoider counts"};
    app.require_subcommand(1);
    int rc = 0;

    struct {
        int n = 0;
        bool csv = false;
    } en;
    auto* c_en = app.add_subcommand("enumerate", "list all systems of a size");
    c_en->add_option("n", en.n, "number of arches")->required()->check(CLI::Range(0, 15));
    c_en->add_flag("--csv", en.csv, "one word per line");
    c_en->callback([&] { rc = run_enumerate(en.n, en.csv); });

    struct {
        std::string from = "arches", to = "arches", text;
    } cv;
    auto* c_cv = app.add_subcommand("convert", "translate between representations");
    const std::vector<std::string> formats{"arches", "dyck", "forest", "perm"};
    c_cv->add_option("--from", cv.from, "input format")->check(CLI::IsMember(formats));
    c_cv->add_option("--to", cv.to, "output format")->check(CLI::IsMember(formats));
    c_cv->add_option("text", cv.text, "structure to translate")->required();
    c_cv->callback([&] { rc = run_convert(cv.from, cv.to, cv.text); });

    struct {
        std::string host, pattern;
    } ct;
    auto* c_ct = app.add_subcommand("contains", "test substructure containment");
    c_ct->add_option("host", ct.host)->required();
    c_ct->add_option("pattern", ct.pattern)->required();
    c_ct->callback([&] { rc = run_contains(ct.host, ct.pattern); });

    struct {
        std::string word;
        int degree = 12;
        bool brute = false, csv = false;
    } gf;
    auto* c_gf = app.add_subcommand("gf", "avoider counts of a pattern");
    c_gf->add_option("pattern", gf.word)->required();
    c_gf->add_option("--degree", gf.degree, "truncation degree")->check(CLI::Range(0, 2000));
    c_gf->add_flag("--brute", gf.brute, "count by exhaustive enumeration");
    c_gf->add_flag("--csv", gf.csv);
    c_gf->callback([&] { rc = run_gf(gf.word, gf.degree, gf.brute, gf.csv); });

    struct {
        std::string word;
    } ky;
    auto* c_ky = app.add_subcommand("key", "canonical class key of a system");
    c_ky->add_option("system", ky.word)->required();
    c_ky->callback([&] { rc = run_key(ky.word); });

    struct {
        int n = 0;
        std::string cache;
        int gf_degree = -1;
        bool csv = false;
    } cs;
    auto* c_cs = app.add_subcommand("census", "all classes at a size, cached on disk");
    c_cs->add_option("n", cs.n)->required()->check(CLI::Range(1, 35));
    c_cs->add_option("--cache", cs.cache, "cache directory (else CATALAN_COHORTS_CACHE, else data dir)");
    c_cs->add_option("--gf", cs.gf_degree, "attach avoider counts to this degree");
    c_cs->add_flag("--csv", cs.csv);
    c_cs->callback([&] { rc = run_census(cs.n, cs.cache, cs.gf_degree, cs.csv); });

    struct {
        int degree = 0;
        bool csv = false;
    } sr;
    auto* c_sr = app.add_subcommand("cohort-series", "class counts by size, via the form recurrences");
    c_sr->add_option("degree", sr.degree)->required()->check(CLI::Range(1, 100000));
    c_sr->add_flag("--csv", sr.csv);
    c_sr->callback([&] { rc = run_cohort_series(sr.degree, sr.csv); });

    struct {
        int n = 0;
        bool csv = false;
    } mz;
    auto* c_mz = app.add_subcommand("motzkin-check", "main class census counts vs the tree numbers");
    c_mz->add_option("n", mz.n)->required()->check(CLI::Range(1, 20));
    c_mz->add_flag("--csv", mz.csv);
    c_mz->callback([&] { rc = run_motzkin_check(mz.n, mz.csv); });

    struct {
        int n = 0;
        bool csv = false;
    } sg;
    auto* c_sg = app.add_subcommand("singletons", "one-member classes: recurrence vs exhaustive census");
    c_sg->add_option("n", sg.n)->required()->check(CLI::Range(1, 20));
    c_sg->add_flag("--csv", sg.csv);
    c_sg->callback([&] { rc = run_singletons(sg.n, sg.csv); });

    struct {
        std::string which;
        int n = 0;
        int degree = -1;
        bool csv = false;
    } vf;
    auto* c_vf = app.add_subcommand("verify", "run a verification harness");
    c_vf->add_option("harness", vf.which)->required()
        ->check(CLI::IsMember({"refinement", "strong", "dominance"}));
    c_vf->add_option("n", vf.n)->required()->check(CLI::Range(1, 20));
    c_vf->add_option("--degree", vf.degree, "override the degree cap");
    c_vf->add_flag("--csv", vf.csv);
    c_vf->callback([&] { rc = run_verify(vf.which, vf.n, vf.degree, vf.csv); });

    struct {
        int n = 0;
    } fm;
    auto* c_fm = app.add_subcommand("family", "the late-parting pair at a size");
    c_fm->add_option("n", fm.n)->required()->check(CLI::Range(4, 40));
    c_fm->callback([&] { rc = run_family(fm.n); });

    struct {
        std::string a, b;
        int verify_to = -1;
    } bj;
    auto* c_bj = app.add_subcommand("bijection", "route between equivalent systems");
    c_bj->add_option("a", bj.a)->required();
    c_bj->add_option("b", bj.b)->required();
    c_bj->add_option("--verify", bj.verify_to, "check bijectivity over hosts up to this size");
    c_bj->callback([&] { rc = run_bijection(bj.a, bj.b, bj.verify_to); });

    struct {
        int degree = 0;
    } gr;
    auto* c_gr = app.add_subcommand("growth", "growth rate and constant of the class counts");
    c_gr->add_option("degree", gr.degree)->required()->check(CLI::Range(100, 100000));
    c_gr->callback([&] { rc = run_growth(gr.degree); });

    struct {
        int degree = 0;
    } rd;
    auto* c_rd = app.add_subcommand("radius", "singularity location from truncated count data");
    c_rd->add_option("approx_degree", rd.degree)->required()->check(CLI::Range(50, 800));
    c_rd->callback([&] { rc = run_radius(rd.degree); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << ordered_json{{"error", e.what()}}.dump(2) << "\n";
        return 2;
    }
    return rc;
}
