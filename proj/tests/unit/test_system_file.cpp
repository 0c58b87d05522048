#include "bellman/control_engine.hpp"
#include "bellman/errors.hpp"
#include "bellman/examples.hpp"
#include "bellman/io/report.hpp"
#include "bellman/io/system_file.hpp"
#include "bellman/random_systems.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bellman;

namespace {

const std::string kData = BELLMAN_DATA_DIR;

const char* kTiny = R"({
  "outcomes": ["a", "b"],
  "horizon": 1,
  "controls": [
    {"id": "c", "measure": ["1/2", "1/2"], "payoff": [0, 1],
     "filtration": [[[0, 1]], [[0], [1]]]}
  ],
  "times": [{"id": "1", "value": 1}],
  "classes": {"1": [["c"]]}
})";

ParseError parse_failure(const std::string& text) {
    try {
        io::parse_system(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "expected a parse error";
    return ParseError("none");
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST(SystemFile, ParsesAMinimalSystem) {
    const auto sys = io::parse_system(kTiny);
    ASSERT_EQ(sys.control_count(), 1u);
    EXPECT_EQ(sys.controls[0].payoff[1], 1);
    EXPECT_EQ(sys.controls[0].measure.weight(0), Rational(1, 2));
    EXPECT_EQ(sys.times[0].per_control[0][1], 1u);
}

TEST(SystemFile, FixturesMatchTheBuiltInExample) {
    const auto bp = examples::build_box_picking();
    EXPECT_EQ(io::read_file(kData + "/box_picking.sys"), io::write_system(bp.consistent));
    EXPECT_EQ(io::read_file(kData + "/box_picking_classical.sys"), io::write_system(bp.classical));
}

TEST(SystemFile, RoundTripIsStructurallyIdentical) {
    std::mt19937_64 rng(71);
    std::vector<control::FiniteControlSystem> systems{examples::build_box_picking().consistent,
                                                      examples::build_box_picking().classical};
    for (int i = 0; i < 20; ++i) systems.push_back(control::random_coherent_system(rng));
    for (const auto& sys : systems) {
        const auto text = io::write_system(sys);
        const auto back = io::parse_system(text);
        EXPECT_EQ(back.space, sys.space);
        EXPECT_EQ(back.horizon, sys.horizon);
        ASSERT_EQ(back.control_count(), sys.control_count());
        for (std::size_t c = 0; c < sys.control_count(); ++c) {
            EXPECT_EQ(back.controls[c].id, sys.controls[c].id);
            EXPECT_EQ(back.controls[c].measure, sys.controls[c].measure);
            EXPECT_EQ(back.controls[c].payoff, sys.controls[c].payoff);
            EXPECT_EQ(back.controls[c].filtration, sys.controls[c].filtration);
            EXPECT_EQ(back.controls[c].observed, sys.controls[c].observed);
        }
        ASSERT_EQ(back.time_count(), sys.time_count());
        for (std::size_t s = 0; s < sys.time_count(); ++s) {
            EXPECT_EQ(back.times[s].id, sys.times[s].id);
            for (std::size_t c = 0; c < sys.control_count(); ++c) {
                EXPECT_EQ(back.times[s].per_control[c], sys.times[s].per_control[c]);
                EXPECT_EQ(back.classes[s].members(c), sys.classes[s].members(c));
            }
        }
        EXPECT_EQ(io::write_system(back), text);
    }
}

TEST(SystemFile, PrefixClassesAreDerivedFromObservedProcesses) {
    const auto sys = io::load_system(kData + "/peek_or_bet.sys");
    const auto zero = *sys.find_time("0");
    const auto one = *sys.find_time("1");
    EXPECT_EQ(sys.classes[zero].members(0), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(sys.classes[one].members(0), (std::vector<std::size_t>{0}));
    EXPECT_EQ(*control::solve(sys).value, Rational(3, 4));
}

TEST(SystemFile, FloatLiteralsAreRejectedWithLocation) {
    const auto e = parse_failure(replace(kTiny, "\"payoff\": [0, 1]", "\"payoff\": [0, 0.5]"));
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.column(), 58u);
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos);
    EXPECT_EQ(parse_failure(replace(kTiny, "[0, 1]", "[0, 1e0]")).line(), 5u);
}

TEST(SystemFile, SyntaxErrorsCarryLineAndColumn) {
    const auto e = parse_failure(replace(kTiny, "\"horizon\": 1,", "\"horizon\": 1"));
    EXPECT_EQ(e.line(), 4u);
    EXPECT_GT(e.column(), 0u);
}

TEST(SystemFile, BadFractionStringsArePointedAt) {
    const auto e = parse_failure(replace(kTiny, "[\"1/2\", \"1/2\"]", "[\"1/2\", \"1/x\"]"));
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.column(), 36u);
}

TEST(SystemFile, StructuralProblemsNameTheMember) {
    for (const auto& [from, to, needle] : std::vector<std::tuple<std::string, std::string, std::string>>{
             {"\"horizon\": 1,", "", "horizon"},
             {"[[\"c\"]]", "[[\"nobody\"]]", "nobody"},
             {"[0, 1]", "[0, 1, 2]", "payoff"},
             {"[\"1/2\", \"1/2\"]", "[\"1/2\", \"1/3\"]", "measure"},
             {"[[[0, 1]], [[0], [1]]]", "\"natural\"", "observed"},
             {"\"1\": [[\"c\"]]", "\"2\": [[\"c\"]]", "time"},
         }) {
        const auto e = parse_failure(replace(kTiny, from, to));
        EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
}

TEST(SystemFile, EmptyControlSetParses) {
    const auto sys = io::load_system(kData + "/empty_controls.sys");
    EXPECT_EQ(sys.control_count(), 0u);
    EXPECT_FALSE(control::solve(sys).value);
}

TEST(Report, VerifyDocumentsAreDeterministicAndDigestTheInput) {
    const auto text = io::read_file(kData + "/box_picking.sys");
    const auto sys = io::parse_system(text);
    const auto a = io::run_verify(sys, text, "box");
    const auto b = io::run_verify(sys, text, "box");
    EXPECT_EQ(a.document, b.document);
    EXPECT_TRUE(a.passed);
    EXPECT_EQ(a.value, "7/6");
    EXPECT_NE(a.document.find(io::sha256_hex(text)), std::string::npos);
    EXPECT_NE(a.document.find("\"schema\": \"bellman-report/1\""), std::string::npos);
}

TEST(Report, Sha256KnownAnswers) {
    EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Report, ClassicalBoxPickingFailsAndEmptyControlsPass) {
    const auto classical_text = io::read_file(kData + "/box_picking_classical.sys");
    const auto classical = io::run_verify(io::parse_system(classical_text), classical_text, "classical");
    EXPECT_FALSE(classical.passed);
    EXPECT_TRUE(classical.validation_passed);
    EXPECT_NE(classical.document.find("\"lhs\": \"4/3\""), std::string::npos);

    const auto empty_text = io::read_file(kData + "/empty_controls.sys");
    const auto empty = io::run_verify(io::parse_system(empty_text), empty_text, "empty");
    EXPECT_TRUE(empty.passed);
    EXPECT_EQ(empty.value, "-inf");
}
