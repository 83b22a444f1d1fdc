#pragma once

// Canonical JSON (sorted keys, rationals as strings) for reports, and the
// on-disk cache of class sets, Brandt counts and pullback maps.

#include "quatrep/decomposition.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace quatrep {

using Json = nlohmann::json;

inline constexpr int kCacheFormatVersion = 1;

inline std::string fnv1a64(const std::string& s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

/// Two-space indented dump with a trailing newline; parse followed by this is the identity.
inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json lattice_to_json(const Lattice& L) {
    Json rows = Json::array();
    for (const auto& r : L.rows()) {
        Json row = Json::array();
        for (const auto& x : r) row.push_back(x.str());
        rows.push_back(row);
    }
    return Json{{"den", L.den().str()}, {"rows", rows}};
}

inline Lattice lattice_from_json(const Json& j) {
    BigInt den(j.at("den").get<std::string>());
    std::vector<Vec4> g;
    for (const auto& row : j.at("rows")) {
        Vec4 v;
        for (int c = 0; c < 4; ++c) v[c] = Rational(BigInt(row.at(static_cast<size_t>(c)).get<std::string>()), den);
        g.push_back(v);
    }
    return Lattice::from_generators(g);
}

inline Json labels_to_json(const std::vector<std::pair<ExtLabel, int>>& labels) {
    Json a = Json::array();
    for (const auto& [E, r] : labels) a.push_back(Json{{"E", label_name(E)}, {"r", r}});
    return a;
}

inline Json eigensystems_to_json(const std::vector<Eigensystem>& es) {
    Json a = Json::array();
    for (const auto& e : es) {
        Json coeffs = Json::array();
        for (const auto& c : e.poly) coeffs.push_back(c.str());
        a.push_back(Json{{"poly", zp::to_string(e.poly)}, {"coefficients", coeffs}, {"mult", e.mult}});
    }
    return a;
}

inline Json report_to_json(const DecompositionReport& R) {
    Json orders = Json::array();
    for (const auto& o : R.orders) {
        orders.push_back(Json{{"name", o.name},
                              {"labels", labels_to_json(o.labels)},
                              {"maximal", o.maximal},
                              {"level", ipow(R.p, o.level_exp)},
                              {"h", o.h},
                              {"dim_eis", o.dim_eis},
                              {"dim_cusp", o.dim_cusp},
                              {"dim_old", o.dim_old},
                              {"dim_new", o.dim_new},
                              {"eigensystems", eigensystems_to_json(o.eigensystems)}});
    }
    Json checks = Json::array();
    for (const auto& c : R.checks) checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    return Json{{"p", R.p},
                {"max_level", ipow(R.p, R.rmax)},
                {"hecke_window", R.hecke_window},
                {"hecke_primes", hecke_primes(R.p, R.hecke_window)},
                {"orders", orders},
                {"checks", checks},
                {"pass", R.all_pass()}};
}

inline Json classset_to_json(const ClassSet& CS) {
    Json ideals = Json::array();
    for (const auto& I : CS.ideals) ideals.push_back(Json{{"lattice", lattice_to_json(I.L)}, {"norm", to_string(I.norm)}});
    return Json{{"p", CS.B.p},
                {"a", CS.B.a},
                {"b", CS.B.b},
                {"order", lattice_to_json(CS.order.L)},
                {"level", CS.order.level.str()},
                {"neighbor_prime", CS.neighbor_prime},
                {"ideals", ideals},
                {"units", CS.units}};
}

inline ClassSet classset_from_json(const Json& j, const GlobalAlgebraDesc& B, const OrderLattice& O) {
    ClassSet CS;
    CS.B = B;
    CS.order = O;
    CS.neighbor_prime = j.at("neighbor_prime").get<int64_t>();
    for (const auto& I : j.at("ideals")) CS.ideals.push_back(RightIdeal{lattice_from_json(I.at("lattice")), parse_rational(I.at("norm").get<std::string>())});
    CS.units = j.at("units").get<std::vector<int64_t>>();
    if (CS.units.size() != CS.ideals.size() || CS.ideals.empty()) throw Error("cache: inconsistent class set");
    return CS;
}

inline Json matrix_to_json(const QMat& M) {
    Json a = Json::array();
    for (const auto& row : M) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(to_string(x));
        a.push_back(r);
    }
    return a;
}

inline QMat matrix_from_json(const Json& j) {
    QMat M;
    for (const auto& row : j) {
        QVec r;
        for (const auto& x : row) r.push_back(parse_rational(x.get<std::string>()));
        M.push_back(r);
    }
    return M;
}

/// Files are {"version", "checksum", "payload"} with checksum = FNV-1a of the canonical payload.
class FileCache : public LadderCache {
public:
    explicit FileCache(std::filesystem::path dir, std::ostream* notices = &std::cerr) : dir_(std::move(dir)), notices_(notices) {
        std::filesystem::create_directories(dir_);
    }

    bool load_order(const OrderLadder& Ld, LadderMember& m) override {
        auto payload = read(order_file(Ld, m));
        if (!payload) return false;
        try {
            const Json& j = *payload;
            if (j.at("p").get<int64_t>() != Ld.p || j.at("hecke_window").get<int64_t>() != Ld.hecke_window ||
                !(lattice_from_json(j.at("classes").at("order")) == m.order.L))
                return notice(order_file(Ld, m), "describes a different order");
            m.cs = classset_from_json(j.at("classes"), Ld.M.B, m.order);
            m.brandt.p = Ld.p;
            m.brandt.nmax = Ld.hecke_window;
            m.brandt.e = m.cs.units;
            m.brandt.r = j.at("brandt").get<std::vector<std::vector<std::vector<int64_t>>>>();
            if (m.brandt.r.size() != static_cast<size_t>(Ld.hecke_window + 1)) return notice(order_file(Ld, m), "has the wrong Hecke range");
            return true;
        } catch (const std::exception& e) {
            return notice(order_file(Ld, m), std::string("is unreadable: ") + e.what());
        }
    }

    void store_order(const OrderLadder& Ld, const LadderMember& m) override {
        write(order_file(Ld, m),
              Json{{"p", Ld.p}, {"hecke_window", Ld.hecke_window}, {"classes", classset_to_json(m.cs)}, {"brandt", m.brandt.r}});
    }

    bool load_pullback(const OrderLadder& Ld, size_t i, size_t j, QMat& P) override {
        auto file = pullback_file(Ld, i, j);
        auto payload = read(file);
        if (!payload) return false;
        try {
            if (payload->at("sub") != fingerprint(Ld.members[i]) || payload->at("sup") != fingerprint(Ld.members[j]))
                return notice(file, "belongs to other class representatives");
            P = matrix_from_json(payload->at("matrix"));
            return P.size() == Ld.members[i].cs.size();
        } catch (const std::exception& e) {
            return notice(file, std::string("is unreadable: ") + e.what());
        }
    }

    void store_pullback(const OrderLadder& Ld, size_t i, size_t j, const QMat& P) override {
        write(pullback_file(Ld, i, j),
              Json{{"sub", fingerprint(Ld.members[i])}, {"sup", fingerprint(Ld.members[j])}, {"matrix", matrix_to_json(P)}});
    }

private:
    static std::string member_key(const LadderMember& m) {
        if (m.maximal) return "max-r1";
        return std::string(label_name(m.labels[0].first)) + "-r" + std::to_string(m.labels[0].second);
    }

    std::filesystem::path order_file(const OrderLadder& Ld, const LadderMember& m) const {
        return dir_ / ("v" + std::to_string(kCacheFormatVersion) + "-p" + std::to_string(Ld.p) + "-" + member_key(m) + "-n" +
                       std::to_string(Ld.hecke_window) + ".json");
    }

    std::filesystem::path pullback_file(const OrderLadder& Ld, size_t i, size_t j) const {
        return dir_ / ("v" + std::to_string(kCacheFormatVersion) + "-p" + std::to_string(Ld.p) + "-pullback-" +
                       member_key(Ld.members[i]) + "-to-" + member_key(Ld.members[j]) + ".json");
    }

    static std::string fingerprint(const LadderMember& m) { return fnv1a64(classset_to_json(m.cs).dump()); }

    bool notice(const std::filesystem::path& f, const std::string& why) {
        if (notices_) *notices_ << "cache: " << f.filename().string() << " " << why << ", recomputing\n";
        return false;
    }

    std::optional<Json> read(const std::filesystem::path& f) {
        if (!std::filesystem::exists(f)) return std::nullopt;
        try {
            std::ifstream in(f);
            Json j = Json::parse(in);
            if (j.at("version").get<int>() != kCacheFormatVersion) {
                notice(f, "has format version " + std::to_string(j.at("version").get<int>()));
                return std::nullopt;
            }
            const Json& payload = j.at("payload");
            if (j.at("checksum").get<std::string>() != fnv1a64(payload.dump())) {
                notice(f, "fails its checksum");
                return std::nullopt;
            }
            return payload;
        } catch (const std::exception&) {
            notice(f, "is corrupt");
            return std::nullopt;
        }
    }

    void write(const std::filesystem::path& f, const Json& payload) {
        Json j{{"version", kCacheFormatVersion}, {"checksum", fnv1a64(payload.dump())}, {"payload", payload}};
        auto tmp = f;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump() << "\n";
        }
        std::filesystem::rename(tmp, f);
    }

    std::filesystem::path dir_;
    std::ostream* notices_;
};

}  // namespace quatrep
