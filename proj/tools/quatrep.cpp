// quatrep: command-line front end for the local tables, epsilon checks,
// class sets, Brandt matrices and the global ladder verification.

#include "quatrep/dichotomy.hpp"
#include "quatrep/report.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>

using namespace quatrep;

namespace {

struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    Json doc;
    std::vector<Table> tables;
    std::vector<std::string> notes;
    bool pass = true;
};

struct UsageError : Error {
    using Error::Error;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

void emit(const Output& out, const std::string& format) {
    if (format == "json") {
        std::cout << canonical_dump(out.doc);
        return;
    }
    bool csv = format == "csv";
    for (size_t t = 0; t < out.tables.size(); ++t) {
        const auto& T = out.tables[t];
        if (t) std::cout << "\n";
        if (csv) {
            for (size_t c = 0; c < T.columns.size(); ++c) std::cout << (c ? "," : "") << csv_field(T.columns[c]);
            std::cout << "\n";
            for (const auto& r : T.rows) {
                for (size_t c = 0; c < r.size(); ++c) std::cout << (c ? "," : "") << csv_field(r[c]);
                std::cout << "\n";
            }
            continue;
        }
        if (!T.title.empty()) std::cout << T.title << "\n";
        std::vector<size_t> w(T.columns.size());
        for (size_t c = 0; c < w.size(); ++c) {
            w[c] = T.columns[c].size();
            for (const auto& r : T.rows) w[c] = std::max(w[c], r[c].size());
        }
        auto line = [&](const std::vector<std::string>& r) {
            for (size_t c = 0; c < r.size(); ++c) std::cout << (c ? "  " : "") << std::left << std::setw(static_cast<int>(w[c])) << r[c];
            std::cout << "\n";
        };
        line(T.columns);
        for (const auto& r : T.rows) line(r);
    }
    if (!csv) {
        if (!out.tables.empty() && !out.notes.empty()) std::cout << "\n";
        for (const auto& n : out.notes) std::cout << n << "\n";
    }
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void check_odd_prime(int64_t p) {
    if (p == 2) throw UsageError("p = 2 is not supported: the local and global constructions need an odd prime");
    if (!is_prime(p)) throw UsageError("p = " + std::to_string(p) + " is not prime");
}

/// r with N = p^r, r >= 1.
int exponent_of(int64_t N, int64_t p, const std::string& flag) {
    int r = valuation(N, p);
    if (r < 1 || ipow(p, r) != N) throw UsageError(flag + " must be a positive power of p");
    return r;
}

Output cmd_local_table(int64_t p, int cmax, int64_t bound) {
    check_odd_prime(p);
    if (cmax < 1) throw UsageError("--max-conductor must be at least 1");
    LocalDivisionQuotient D(p, std::max(1, cmax - 1), bound);
    Output out;
    Table T{"", {"c", "dim", "label", "minimal", "inv_K", "inv_L", "inv_M", "pred_K", "pred_L", "pred_M", "match"}, {}};
    Json rows = Json::array();
    size_t mismatches = 0;
    for (const auto& r : D.records()) {
        if (r.conductor > cmax) continue;
        Json inv, pred;
        bool match = true;
        std::vector<std::string> row{std::to_string(r.conductor), std::to_string(r.dim), rep_label_name(r.label), yes_no(r.minimal)};
        std::vector<std::string> preds;
        for (ExtLabel E : kAllLabels) {
            int64_t a = D.invariant_dimension(r, E), b = predicted_dimension(r, E, p);
            inv[label_name(E)] = a;
            pred[label_name(E)] = b;
            match = match && a == b;
            row.push_back(std::to_string(a));
            preds.push_back(std::to_string(b));
        }
        row.insert(row.end(), preds.begin(), preds.end());
        row.push_back(yes_no(match));
        T.rows.push_back(row);
        if (!match) ++mismatches;
        rows.push_back(Json{{"conductor", r.conductor},
                            {"dim", r.dim},
                            {"label", rep_label_name(r.label)},
                            {"minimal", r.minimal},
                            {"invariants", inv},
                            {"predicted", pred},
                            {"match", match}});
    }
    out.pass = mismatches == 0;
    out.doc = Json{{"p", p}, {"max_conductor", cmax}, {"rows", rows}, {"mismatches", mismatches}, {"pass", out.pass}};
    out.tables.push_back(T);
    out.notes.push_back(std::to_string(T.rows.size()) + " representations, " + std::to_string(mismatches) + " mismatches");
    return out;
}

Output cmd_dichotomy(int64_t p, int c, int64_t bound) {
    check_odd_prime(p);
    if (c < 3 || c % 2 == 0) throw UsageError("--conductor must be odd and at least 3");
    LocalDivisionQuotient D(p, c - 1, bound);
    auto rep = dichotomy_check(D, c);
    Output out;
    Table T{"", {"row", "label", "E", "chi", "m_B", "m_eps", "ok"}, {}};
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        std::string chi = e.sign_char ? std::string("nu_") + label_name(e.E) : "1";
        T.rows.push_back({std::to_string(e.row), rep_label_name(e.label), label_name(e.E), chi, to_string(e.m_B),
                          e.eps_constant ? std::to_string(e.m_eps) : "varies", e.ok ? "ok" : "VIOLATION"});
        entries.push_back(Json{{"row", e.row},
                               {"label", rep_label_name(e.label)},
                               {"E", label_name(e.E)},
                               {"chi", chi},
                               {"m_B", to_string(e.m_B)},
                               {"m_eps", e.m_eps},
                               {"eps_constant", e.eps_constant},
                               {"ok", e.ok}});
    }
    Json counts = Json::object();
    for (const auto& [lab, pr] : rep.counts) {
        counts[rep_label_name(lab)] = Json{{"representations", pr.first}, {"kappa_orbits", pr.second}};
        out.notes.push_back(std::string(rep_label_name(lab)) + ": " + std::to_string(pr.first) + " representations, " +
                            std::to_string(pr.second) + " kappa orbits");
    }
    out.pass = rep.violations == 0 && rep.counting_ok;
    out.notes.push_back(std::to_string(rep.violations) + " violations: " + (out.pass ? "pass" : "FAIL"));
    out.doc = Json{{"p", p},
                   {"conductor", c},
                   {"entries", entries},
                   {"counts", counts},
                   {"violations", rep.violations},
                   {"counting_ok", rep.counting_ok},
                   {"pass", out.pass}};
    out.tables.push_back(T);
    return out;
}

Output cmd_epsilon(int64_t p, int f) {
    check_odd_prime(p);
    if (f < 1) throw UsageError("--kappa-conductor must be at least 1");
    Output out;
    Table R{"ratio epsilon(sigma w_E) / epsilon(sigma)", {"K", "kappa", "E", "ratio", "expected", "mechanism", "match"}, {}};
    Table M{"multiplicities m(sigma, chi)", {"K", "kappa", "E", "chi", "m_GL2", "m_B"}, {}};
    Json ratios = Json::array(), mults = Json::array();
    size_t mismatches = 0;
    for (ExtLabel K : {ExtLabel::K, ExtLabel::L}) {
        auto ks = admissible_characters(p, K, f);
        for (size_t i = 0; i < ks.size(); ++i)
            for (ExtLabel E : kAllLabels) {
                int r = twist_epsilon_ratio(ks[i], E), x = expected_twist_ratio(K, f, E), m = twist_ratio_mechanism(p, K, f, E);
                bool ok = r == x && r == m;
                if (!ok) ++mismatches;
                R.rows.push_back({label_name(K), std::to_string(i), label_name(E), std::to_string(r), std::to_string(x), std::to_string(m),
                                  yes_no(ok)});
                ratios.push_back(Json{{"K", label_name(K)}, {"kappa", i}, {"E", label_name(E)}, {"ratio", r}, {"expected", x},
                                      {"mechanism", m}, {"match", ok}});
            }
        if (f < 2) continue;
        auto orbits = admissible_orbits(p, K, f);
        for (size_t i = 0; i < orbits.size(); ++i)
            for (ExtLabel E : kAllLabels)
                for (bool s : {false, true}) {
                    if (E == ExtLabel::M && s) continue;
                    int m = tunnell_multiplicity(orbits[i], E, s);
                    std::string chi = s ? std::string("nu_") + label_name(E) : "1";
                    M.rows.push_back({label_name(K), std::to_string(i), label_name(E), chi, std::to_string(m), std::to_string(1 - m)});
                    mults.push_back(Json{{"K", label_name(K)}, {"kappa_orbit", i}, {"E", label_name(E)}, {"chi", chi}, {"m_GL2", m},
                                         {"m_B", 1 - m}});
                }
    }
    out.pass = mismatches == 0;
    out.doc = Json{{"p", p}, {"kappa_conductor", f}, {"ratios", ratios}, {"multiplicities", mults}, {"mismatches", mismatches},
                   {"pass", out.pass}};
    out.tables.push_back(R);
    if (!M.rows.empty()) out.tables.push_back(M);
    if (R.rows.empty()) out.notes.push_back("no admissible characters of conductor " + std::to_string(f));
    out.notes.push_back(std::to_string(mismatches) + " mismatches");
    return out;
}

/// The maximal order when no extension is given or N = p, else O_r(E) with p^r = N.
OrderLattice order_for(const MaximalOrderData& M, const std::string& ext, int64_t N) {
    int r = exponent_of(N, M.B.p, "--N");
    if (ext.empty()) {
        if (r != 1) throw UsageError("--ext is required when --N is above p");
        return maximal_order_lattice(M);
    }
    return special_order(M, parse_label(ext), r);
}

Output cmd_classset(int64_t p, const std::string& ext, int64_t N) {
    check_odd_prime(p);
    auto M = maximal_order_data(p);
    auto CS = right_ideal_classes(M.B, order_for(M, ext, N));
    Output out;
    out.doc = classset_to_json(CS);
    out.doc["h"] = CS.size();
    out.doc["mass"] = to_string(CS.mass());
    Table T{"", {"class", "norm", "units", "basis"}, {}};
    for (size_t i = 0; i < CS.size(); ++i) {
        std::string basis;
        for (const auto& v : CS.ideals[i].L.basis()) {
            basis += basis.empty() ? "" : "; ";
            for (int c = 0; c < 4; ++c) basis += (c ? " " : "") + to_string(v[c]);
        }
        T.rows.push_back({std::to_string(i), to_string(CS.ideals[i].norm), std::to_string(CS.units[i]), basis});
    }
    out.tables.push_back(T);
    out.notes.push_back("algebra (" + std::to_string(M.B.a) + ", " + std::to_string(M.B.b) + "), order level " + CS.order.level.str());
    out.notes.push_back("h = " + std::to_string(CS.size()) + ", mass = " + to_string(CS.mass()));
    return out;
}

Output cmd_brandt(int64_t p, const std::string& ext, int64_t N, int64_t n, int threads) {
    check_odd_prime(p);
    if (n < 1) throw UsageError("--n must be positive");
    if (n % p == 0) throw UsageError("--n must be prime to p");
    auto M = maximal_order_data(p);
    auto CS = right_ideal_classes(M.B, order_for(M, ext, N));
    auto D = brandt_data(CS, n, threads);
    QMat T = D.matrix(n);
    Output out;
    out.doc = Json{{"p", p}, {"level", CS.order.level.str()}, {"n", n}, {"units", CS.units}, {"matrix", matrix_to_json(T)}};
    Table tab{"", {}, {}};
    for (size_t j = 0; j < T.size(); ++j) tab.columns.push_back(std::to_string(j));
    for (const auto& row : T) {
        std::vector<std::string> r;
        for (const auto& x : row) r.push_back(to_string(x));
        tab.rows.push_back(r);
    }
    out.tables.push_back(tab);
    out.notes.push_back("T_" + std::to_string(n) + " on " + std::to_string(CS.size()) + " classes");
    return out;
}

Output cmd_dims(int64_t N, int k) {
    auto [all, fresh] = classical_dims(N, k);
    Output out;
    out.doc = Json{{"N", N}, {"k", k}, {"dim_cusp", all}, {"dim_new", fresh}};
    out.tables.push_back(Table{"", {"N", "k", "dim_cusp", "dim_new"}, {{std::to_string(N), std::to_string(k), std::to_string(all), std::to_string(fresh)}}});
    return out;
}

Output cmd_verify(int64_t p, int64_t max_level, int64_t window, int threads, const std::string& cache_dir) {
    check_odd_prime(p);
    int r = exponent_of(max_level, p, "--max-level");
    if (window < 2) throw UsageError("--hecke-window must be at least 2");
    std::unique_ptr<FileCache> cache;
    if (!cache_dir.empty()) cache = std::make_unique<FileCache>(cache_dir);
    auto rep = verify_theorems(p, r, window, threads, cache.get());
    Output out;
    out.doc = report_to_json(rep);
    out.pass = rep.all_pass();
    Table O{"orders", {"order", "level", "h", "eis", "cusp", "old", "new", "eigensystems"}, {}};
    for (const auto& o : rep.orders) {
        std::string es;
        for (const auto& e : o.eigensystems) es += (es.empty() ? "" : " ") + ("(" + zp::to_string(e.poly) + ")^" + std::to_string(e.mult));
        O.rows.push_back({o.name, std::to_string(ipow(p, o.level_exp)), std::to_string(o.h), std::to_string(o.dim_eis),
                          std::to_string(o.dim_cusp), std::to_string(o.dim_old), std::to_string(o.dim_new), es});
    }
    Table C{"checks", {"check", "result", "lhs", "rhs"}, {}};
    for (const auto& c : rep.checks) C.rows.push_back({c.name, c.pass ? "PASS" : "FAIL", c.lhs, c.rhs});
    out.tables = {O, C};
    out.notes.push_back(out.pass ? "all checks pass" : "some checks FAIL");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local and global quaternionic representation checks"};
    app.require_subcommand(1);

    int64_t p = 0, N = 0, n = 0, max_level = 0, window = 20, bound = QuotientGroup::kDefaultBound;
    int cmax = 0, conductor = 0, kappa_f = 0, k = 2, threads = 1;
    std::string ext, format = "text", cache_dir;
    if (const char* env = std::getenv("QUATREP_CACHE_DIR")) cache_dir = env;

    auto fmt = [&](CLI::App* s) {
        s->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    };
    auto* lt = app.add_subcommand("local-table", "Invariant dimensions of the local representations against the table");
    lt->add_option("--p", p, "Odd prime")->required();
    lt->add_option("--max-conductor", cmax, "Largest conductor")->required();
    lt->add_option("--group-bound", bound, "Largest quotient group to build");
    fmt(lt);
    auto* di = app.add_subcommand("dichotomy", "Local multiplicity dichotomy at an odd conductor");
    di->add_option("--p", p, "Odd prime")->required();
    di->add_option("--conductor", conductor, "Odd conductor >= 3")->required();
    di->add_option("--group-bound", bound, "Largest quotient group to build");
    fmt(di);
    auto* ep = app.add_subcommand("epsilon", "Epsilon ratios and multiplicities for admissible characters");
    ep->add_option("--p", p, "Odd prime")->required();
    ep->add_option("--kappa-conductor", kappa_f, "Conductor of kappa")->required();
    fmt(ep);
    auto* cs = app.add_subcommand("classset", "Right ideal classes of an order");
    cs->add_option("--p", p, "Odd prime")->required();
    cs->add_option("--ext", ext, "Extension type of the special order")->check(CLI::IsMember({"K", "L", "M"}));
    cs->add_option("--N", N, "Level p^r")->required();
    fmt(cs);
    auto* br = app.add_subcommand("brandt", "Brandt matrix T_n of an order");
    br->add_option("--p", p, "Odd prime")->required();
    br->add_option("--ext", ext, "Extension type of the special order")->check(CLI::IsMember({"K", "L", "M"}));
    br->add_option("--N", N, "Level p^r")->required();
    br->add_option("--n", n, "Hecke index prime to p")->required();
    br->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    fmt(br);
    auto* dm = app.add_subcommand("dims", "Dimensions of cusp forms on Gamma_0(N)");
    dm->add_option("--N", N, "Level")->required();
    dm->add_option("--k", k, "Even weight");
    fmt(dm);
    auto* ve = app.add_subcommand("verify", "Full ladder decomposition with theorem checks");
    ve->add_option("--p", p, "Odd prime")->required();
    ve->add_option("--max-level", max_level, "Largest level p^r")->required();
    ve->add_option("--hecke-window", window, "Hecke operators T_l for primes l up to this bound");
    ve->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    ve->add_option("--cache-dir", cache_dir, "Cache directory (default: $QUATREP_CACHE_DIR)");
    fmt(ve);

    CLI11_PARSE(app, argc, argv);

    try {
        Output out;
        if (*lt) out = cmd_local_table(p, cmax, bound);
        else if (*di) out = cmd_dichotomy(p, conductor, bound);
        else if (*ep) out = cmd_epsilon(p, kappa_f);
        else if (*cs) out = cmd_classset(p, ext, N);
        else if (*br) out = cmd_brandt(p, ext, N, n, threads);
        else if (*dm) out = cmd_dims(N, k);
        else out = cmd_verify(p, max_level, window, threads, cache_dir);
        emit(out, format);
        return out.pass ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
