#include "quatrep/report.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

using namespace quatrep;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("quatrep-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST(Json, LatticeAndMatrixRoundTrip) {
    auto M = maximal_order_data(11);
    EXPECT_EQ(lattice_from_json(lattice_to_json(M.P)), M.P);
    QMat A{{Rational(1, 2), -3}, {0, Rational(-7, 4)}};
    EXPECT_EQ(matrix_from_json(matrix_to_json(A)), A);
    // FNV-1a 64 reference values
    EXPECT_EQ(fnv1a64(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a64("a"), "af63dc4c8601ec8c");
}

TEST(Json, ReportIsCanonical) {
    auto rep = verify_theorems(11, 1);
    std::string s = canonical_dump(report_to_json(rep));
    EXPECT_EQ(canonical_dump(Json::parse(s)), s);
    EXPECT_NE(s.find("\"bottom-rung\""), std::string::npos);
}

TEST(FileCache, WarmRunMatchesAndCorruptionRecomputes) {
    auto dir = fresh_dir("cache");
    std::ostringstream notices;
    FileCache cache(dir, &notices);
    auto cold = canonical_dump(report_to_json(verify_theorems(3, 3, 20, 1, &cache)));
    size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir)) files += e.path().extension() == ".json";
    EXPECT_GT(files, 0u);
    EXPECT_EQ(canonical_dump(report_to_json(verify_theorems(3, 3, 20, 1, &cache))), cold);
    EXPECT_TRUE(notices.str().empty());

    for (const auto& e : fs::directory_iterator(dir)) {
        std::ofstream out(e.path(), std::ios::app);
        out << " ";
    }
    // trailing whitespace keeps the JSON valid; now flip a digit in one payload
    fs::path victim = dir / "v1-p3-max-r1-n20.json";
    ASSERT_TRUE(fs::exists(victim));
    std::string text;
    {
        std::ifstream in(victim);
        std::getline(in, text);
    }
    auto pos = text.find("\"units\":[");
    ASSERT_NE(pos, std::string::npos);
    text[pos + 9] = text[pos + 9] == '9' ? '8' : '9';
    {
        std::ofstream out(victim);
        out << text;
    }
    EXPECT_EQ(canonical_dump(report_to_json(verify_theorems(3, 3, 20, 1, &cache))), cold);
    EXPECT_NE(notices.str().find("checksum"), std::string::npos);

    // a different Hecke window never reads the other window's files
    std::ostringstream quiet;
    FileCache other(dir, &quiet);
    verify_theorems(3, 2, 12, 1, &other);
    EXPECT_TRUE(quiet.str().empty());
    fs::remove_all(dir);
}
