#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "eax/instance.hpp"
#include "eax/tour.hpp"

namespace {

using eax::Instance;
using eax::ParseError;
using eax::ParseErrorKind;

const char* kUnitSquare =
    "NAME: square\n"
    "TYPE: TSP\n"
    "DIMENSION: 4\n"
    "EDGE_WEIGHT_TYPE: EUC_2D\n"
    "NODE_COORD_SECTION\n"
    "1 0 0\n"
    "2 1 0\n"
    "3 1 1\n"
    "4 0 1\n"
    "EOF\n";

ParseErrorKind parse_kind(const std::string& text, std::size_t* line = nullptr) {
    try {
        eax::parse_tsplib(text);
    } catch (const ParseError& e) {
        if (line) *line = e.line();
        return e.kind();
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return ParseErrorKind::MalformedHeader;
}

TEST(ParseTsplib, UnitSquareAllDistancesRoundToOne) {
    const auto inst = eax::parse_tsplib(kUnitSquare);
    EXPECT_EQ(inst.name(), "square");
    ASSERT_EQ(inst.dimension(), 4);
    for (int u = 0; u < 4; ++u) {
        for (int v = u + 1; v < 4; ++v) EXPECT_EQ(inst.distance(u, v), 1) << u << "," << v;
    }
}

TEST(ParseTsplib, DimensionFiveWithFourLinesIsCountMismatch) {
    std::string text = kUnitSquare;
    text.replace(text.find("DIMENSION: 4"), 12, "DIMENSION: 5");
    EXPECT_EQ(parse_kind(text), ParseErrorKind::CoordinateCountMismatch);
}

TEST(ParseTsplib, TooManyCoordinateLinesNamesTheLine) {
    std::string text = kUnitSquare;
    text.replace(text.find("EOF"), 3, "5 2 2\nEOF");
    std::size_t line = 0;
    EXPECT_EQ(parse_kind(text, &line), ParseErrorKind::CoordinateCountMismatch);
    EXPECT_EQ(line, 10u);
}

TEST(ParseTsplib, NonNumericCoordinateNamesTheLine) {
    std::string text = kUnitSquare;
    text.replace(text.find("3 1 1"), 5, "3 1 y");
    std::size_t line = 0;
    EXPECT_EQ(parse_kind(text, &line), ParseErrorKind::NonNumericCoordinate);
    EXPECT_EQ(line, 8u);
}

TEST(ParseTsplib, MissingFieldIsNonNumericCoordinate) {
    std::string text = kUnitSquare;
    text.replace(text.find("2 1 0"), 5, "2 1");
    EXPECT_EQ(parse_kind(text), ParseErrorKind::NonNumericCoordinate);
}

TEST(ParseTsplib, UnsupportedWeightType) {
    std::string text = kUnitSquare;
    text.replace(text.find("EUC_2D"), 6, "GEO");
    std::size_t line = 0;
    EXPECT_EQ(parse_kind(text, &line), ParseErrorKind::UnsupportedWeightType);
    EXPECT_EQ(line, 4u);
}

TEST(ParseTsplib, MalformedHeaders) {
    std::string no_colon = kUnitSquare;
    no_colon.replace(no_colon.find("DIMENSION: 4"), 12, "DIMENSION 4");
    EXPECT_EQ(parse_kind(no_colon), ParseErrorKind::MalformedHeader);

    std::string bad_dim = kUnitSquare;
    bad_dim.replace(bad_dim.find("DIMENSION: 4"), 12, "DIMENSION: x");
    EXPECT_EQ(parse_kind(bad_dim), ParseErrorKind::MalformedHeader);

    std::string no_name = kUnitSquare;
    no_name.erase(0, no_name.find('\n') + 1);
    EXPECT_EQ(parse_kind(no_name), ParseErrorKind::MalformedHeader);

    std::string atsp = kUnitSquare;
    atsp.replace(atsp.find("TYPE: TSP"), 9, "TYPE: ATSP");
    EXPECT_EQ(parse_kind(atsp), ParseErrorKind::MalformedHeader);

    EXPECT_EQ(parse_kind("NAME: x\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EUC_2D\n"), ParseErrorKind::MalformedHeader);
}

TEST(ParseTsplib, AcceptsDuplicateCoordinatesAndCommentKeys) {
    const auto inst = eax::parse_tsplib(
        "NAME : dup\nCOMMENT : two identical points\nTYPE : TSP\nDIMENSION : 4\n"
        "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 5 5\n2 5 5\n3 0 0\n4 -3.5e0 4\n");
    EXPECT_EQ(inst.distance(0, 1), 0);
    EXPECT_EQ(inst.distance(2, 3), 5);  // |(-3.5, 4)| = 5.315 -> 5
}

TEST(LoadInstance, Berlin52OptimalTourMatchesSidecar) {
    const auto inst = eax::load_instance(std::string(EAX_DATA_DIR) + "/berlin52.tsp");
    EXPECT_EQ(inst.dimension(), 52);
    ASSERT_TRUE(inst.known_optimum());
    ASSERT_TRUE(inst.optimal_tour());
    EXPECT_EQ(*inst.known_optimum(), 7542);

    // Recompute directly from coordinates.
    const auto& c = inst.coords();
    const auto& t = *inst.optimal_tour();
    long long total = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& p = c[t[i]];
        const auto& q = c[t[(i + 1) % t.size()]];
        total += static_cast<long long>(std::lround(std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y))));
    }
    EXPECT_EQ(total, 7542);
    EXPECT_EQ(eax::tour_length(inst, t), 7542);
}

TEST(LoadInstance, MissingFileThrows) {
    EXPECT_THROW(eax::load_instance("/nonexistent/x.tsp"), std::exception);
}

TEST(Distance, PythagoreanAndRounding) {
    const Instance inst("d", {{0, 0}, {3, 4}, {1, 1}, {10, 10}});
    EXPECT_EQ(inst.distance(0, 1), 5);
    EXPECT_EQ(inst.distance(0, 2), 1);
    EXPECT_EQ(inst.distance(1, 0), 5);
}

TEST(Distance, OutOfRangeThrows) {
    const Instance inst("d", {{0, 0}, {3, 4}, {1, 1}, {10, 10}});
    EXPECT_THROW(inst.distance(0, 4), std::out_of_range);
    EXPECT_THROW(inst.distance(-1, 0), std::out_of_range);
}

TEST(Distance, MatchesDirectFormulaOnRandomPairs) {
    std::mt19937_64 rng(11);
    const auto inst = eax::generate_rue(200, 100000, 3);
    std::uniform_int_distribution<int> pick(0, 199);
    for (int i = 0; i < 5000; ++i) {
        const int u = pick(rng), v = pick(rng);
        const auto& p = inst.coords()[u];
        const auto& q = inst.coords()[v];
        const double d = std::hypot(p.x - q.x, p.y - q.y);
        EXPECT_EQ(inst.distance(u, v), static_cast<long long>(std::floor(d + 0.5)));
        EXPECT_EQ(inst.distance(u, v), inst.distance(v, u));
    }
}

TEST(GenerateRue, DeterministicSizedAndSeedSensitive) {
    const auto a = eax::generate_rue(8, 100, 7);
    const auto b = eax::generate_rue(8, 100, 7);
    const auto c = eax::generate_rue(8, 100, 8);
    ASSERT_EQ(a.dimension(), 8);
    bool differs = false;
    for (int i = 0; i < 8; ++i) {
        EXPECT_EQ(a.coords()[i].x, b.coords()[i].x);
        EXPECT_EQ(a.coords()[i].y, b.coords()[i].y);
        differs |= a.coords()[i].x != c.coords()[i].x || a.coords()[i].y != c.coords()[i].y;
        EXPECT_GE(a.coords()[i].x, 0.0);
        EXPECT_LE(a.coords()[i].y, 100.0);
    }
    EXPECT_TRUE(differs);
    EXPECT_EQ(eax::generate_rue(500, 1000000, 1).dimension(), 500);
    EXPECT_THROW(eax::generate_rue(3, 100, 1), std::invalid_argument);
    EXPECT_THROW(eax::generate_rue(8, 0, 1), std::invalid_argument);
}

TEST(NeighborLists, SizeSortedAndComplete) {
    for (int k : {1, 5, 10, 40}) {
        const auto inst = eax::generate_rue(30, 1000, 5, k);
        for (int v = 0; v < 30; ++v) {
            const auto& nb = inst.neighbors(v);
            ASSERT_EQ(static_cast<int>(nb.size()), std::min(k, 29));
            std::set<int> uniq(nb.begin(), nb.end());
            EXPECT_EQ(uniq.size(), nb.size());
            EXPECT_FALSE(uniq.count(v));
            for (std::size_t i = 1; i < nb.size(); ++i) EXPECT_LE(inst.distance(v, nb[i - 1]), inst.distance(v, nb[i]));
            for (int w = 0; w < 30; ++w) {
                if (w == v || uniq.count(w)) continue;
                EXPECT_GE(inst.distance(v, w), inst.distance(v, nb.back()));
            }
        }
    }
}

TEST(Instance, RejectsTinyAndBadK) {
    EXPECT_THROW(Instance("x", {{0, 0}, {1, 1}, {2, 2}}), std::invalid_argument);
    EXPECT_THROW(Instance("x", {{0, 0}, {1, 1}, {2, 2}, {3, 3}}, 0), std::invalid_argument);
}

TEST(Instance, SetOptimumValidatesTour) {
    auto inst = eax::parse_tsplib(kUnitSquare);
    EXPECT_THROW(inst.set_optimum(5, std::vector<eax::Vertex>{0, 1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(inst.set_optimum(4, std::vector<eax::Vertex>{0, 1, 1, 3}), std::invalid_argument);
    EXPECT_THROW(inst.set_optimum(4, std::vector<eax::Vertex>{0, 1, 2}), std::invalid_argument);
    inst.set_optimum(4, std::vector<eax::Vertex>{0, 1, 2, 3});
    EXPECT_EQ(*inst.known_optimum(), 4);
}

TEST(OptimumSidecar, RoundTripAndErrors) {
    const eax::OptimumSidecar s{42, std::vector<eax::Vertex>{0, 2, 1, 3}};
    const auto text = eax::format_optimum_sidecar(s);
    EXPECT_EQ(text, "42\n1 3 2 4\n");
    const auto back = eax::parse_optimum_sidecar(text);
    EXPECT_EQ(back.optimum, 42);
    EXPECT_EQ(back.tour, s.tour);
    EXPECT_FALSE(eax::parse_optimum_sidecar("17\n").tour);
    EXPECT_THROW(eax::parse_optimum_sidecar(""), std::invalid_argument);
    EXPECT_THROW(eax::parse_optimum_sidecar("x\n"), std::invalid_argument);
    EXPECT_THROW(eax::parse_optimum_sidecar("4\n1 0 2\n"), std::invalid_argument);
}

TEST(ToTsplib, RoundTripPreservesDistances) {
    const auto inst = eax::generate_rue(40, 1000000, 9);
    const auto back = eax::parse_tsplib(eax::to_tsplib(inst));
    ASSERT_EQ(back.dimension(), 40);
    EXPECT_EQ(back.name(), inst.name());
    for (int u = 0; u < 40; ++u) {
        for (int v = 0; v < 40; ++v) EXPECT_EQ(back.distance(u, v), inst.distance(u, v));
    }
}

}  // namespace
