#include "revdyn/automaton.hpp"

#include <random>
#include <set>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace revdyn;
using revdyn::testing::identity_machine;
using revdyn::testing::table1;
using revdyn::testing::table1_doc;

namespace {

std::string without_line(std::string doc, const std::string& line) {
  const auto pos = doc.find(line + "\n");
  doc.erase(pos, line.size() + 1);
  return doc;
}

int error_line(const std::string& doc) {
  try {
    parse_automaton(doc);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

std::string error_text(const std::string& doc) {
  try {
    parse_automaton(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(parse_automaton, table1) {
  const auto a = table1();
  EXPECT_EQ(a.states().size(), 2u);
  EXPECT_EQ(a.inputs().size(), 3u);
  EXPECT_EQ(a.outputs().size(), 3u);
  EXPECT_EQ(step(a, {"s1", "3"}), (Configuration{"s2", "2"}));
  EXPECT_EQ(a.states()[0], "s1");
  EXPECT_EQ(a.inputs()[2], "3");
}

TEST(parse_automaton, shipped_document_matches_fixture) {
  const auto a = load_automaton(REVDYN_SOURCE_DIR "/examples/table1.aut");
  EXPECT_EQ(a, table1());
}

TEST(parse_automaton, identity_machine) {
  const auto a = identity_machine();
  EXPECT_EQ(a.config_count(), 1u);
  EXPECT_EQ(step(a, {"a", "0"}), (Configuration{"a", "0"}));
}

TEST(parse_automaton, missing_row) {
  const auto doc = without_line(table1_doc(), "s2 3 -> s1 3");
  EXPECT_NE(error_text(doc).find("missing pair (s2,3)"), std::string::npos) << error_text(doc);
}

TEST(parse_automaton, duplicate_row_reports_line) {
  const std::string doc = std::string(table1_doc()) + "s1 1 -> s1 1\n";
  EXPECT_EQ(error_line(doc), 11);
  EXPECT_NE(error_text(doc).find("duplicate pair (s1,1)"), std::string::npos);
}

TEST(parse_automaton, undeclared_symbol_reports_line) {
  std::string doc = table1_doc();
  doc.replace(doc.find("s2 2 -> s2 3"), 12, "s2 2 -> s3 3");
  EXPECT_EQ(error_line(doc), 9);
  EXPECT_NE(error_text(doc).find("undeclared state 's3'"), std::string::npos);

  doc = table1_doc();
  doc.replace(doc.find("s1 2 -> s1 2"), 12, "s1 2 -> s1 7");
  EXPECT_EQ(error_line(doc), 6);
  EXPECT_NE(error_text(doc).find("undeclared output '7'"), std::string::npos);
}

TEST(parse_automaton, malformed_lines) {
  EXPECT_EQ(error_line("states: a\ninputs: 0\noutputs: 0\ntable:\na 0 a 0\n"), 5);
  EXPECT_EQ(error_line("states: a\nbogus\n"), 2);
  EXPECT_EQ(error_line("states: a a\n"), 1);
  EXPECT_EQ(error_line("states: a -> b\n"), 1);
  EXPECT_EQ(error_line("states: a\ntable:\n"), 2);
}

TEST(parse_automaton, comments_and_blank_lines) {
  const auto a = parse_automaton("# header\n\nstates: a\n  # indented comment\ninputs: 0\n"
                                 "outputs: 0\ntable:\n\na 0 -> a 0\n");
  EXPECT_EQ(a, identity_machine());
}

TEST(parse_automaton, format_round_trip) {
  const auto a = table1();
  EXPECT_EQ(parse_automaton(format_automaton(a)), a);
}

TEST(check_reversible, table1) {
  const auto rep = check_reversible(table1());
  EXPECT_TRUE(rep.reversible);
  EXPECT_TRUE(rep.collisions.empty());
}

TEST(check_reversible, constant_map_collides) {
  const auto a = parse_automaton(
      "states: s\ninputs: 0 1\noutputs: 0\ntable:\ns 0 -> s 0\ns 1 -> s 0\n");
  const auto rep = check_reversible(a);
  EXPECT_FALSE(rep.reversible);
  ASSERT_EQ(rep.collisions.size(), 1u);
  EXPECT_EQ(rep.collisions[0], (std::vector<Configuration>{{"s", "0"}, {"s", "1"}}));
}

TEST(check_reversible, all_24_split_permutations) {
  for (const auto& img : revdyn::testing::all_permutations(4)) {
    const auto a = revdyn::testing::machine_from_image(img, 2, 2);
    EXPECT_TRUE(check_reversible(a).reversible);
  }
}

// Injectivity of U agrees with counting distinct images, over every 2-state
// machine with 2 inputs and 2 outputs (4^4 tables).
TEST(check_reversible, agrees_with_pairwise_oracle_exhaustively) {
  std::size_t reversible = 0;
  for (std::size_t code = 0; code < 256; ++code) {
    std::vector<std::size_t> img(4);
    for (std::size_t k = 0; k < 4; ++k) img[k] = (code >> (2 * k)) & 3;
    std::string doc = "states: q0 q1\ninputs: 0 1\noutputs: 0 1\ntable:\n";
    for (std::size_t k = 0; k < 4; ++k)
      doc += "q" + std::to_string(k / 2) + " " + std::to_string(k % 2) + " -> q" +
             std::to_string(img[k] / 2) + " " + std::to_string(img[k] % 2) + "\n";
    const auto a = parse_automaton(doc);
    std::set<std::size_t> distinct(img.begin(), img.end());
    const bool expected = distinct.size() == 4;
    EXPECT_EQ(check_reversible(a).reversible, expected);
    EXPECT_EQ(revdyn::testing::pairwise_injective(a), expected);
    reversible += expected;
  }
  EXPECT_EQ(reversible, 24u);
}

TEST(step, table1_rows) {
  const auto a = table1();
  EXPECT_EQ(step(a, {"s1", "3"}), (Configuration{"s2", "2"}));
  EXPECT_EQ(step(a, {"s2", "2"}), (Configuration{"s2", "3"}));
}

TEST(step, rejects_symbol_outside_inputs) {
  EXPECT_THROW(step(table1(), {"s1", "4"}), DomainError);
  EXPECT_THROW(step(table1(), {"s9", "1"}), DomainError);
}

// Neither delta nor lambda is one-to-one on its own.
TEST(step, table1_components_not_injective) {
  const auto a = table1();
  EXPECT_EQ(step(a, {"s1", "3"}).state, step(a, {"s2", "1"}).state);
  EXPECT_EQ(step(a, {"s1", "2"}).symbol, step(a, {"s1", "3"}).symbol);
}

TEST(step, table1_fixed_points) {
  const auto a = table1();
  std::vector<Configuration> fixed;
  for (std::size_t k = 0; k < a.config_count(); ++k) {
    const auto c = a.input_config(k);
    if (step(a, c) == c) fixed.push_back(c);
  }
  EXPECT_EQ(fixed, (std::vector<Configuration>{{"s1", "1"}, {"s1", "2"}, {"s2", "1"}}));
}

TEST(run_closed, period_three_orbit) {
  const auto t = run_closed(table1(), {"s1", "3"}, 3);
  EXPECT_EQ(t.steps, (std::vector<Configuration>{
                         {"s1", "3"}, {"s2", "2"}, {"s2", "3"}, {"s1", "3"}}));
  EXPECT_TRUE(t.closed_loop());
}

TEST(run_closed, zero_steps) {
  const auto t = run_closed(table1(), {"s2", "1"}, 0);
  EXPECT_EQ(t.steps, (std::vector<Configuration>{{"s2", "1"}}));
}

TEST(run_closed, fixed_point) {
  const auto t = run_closed(table1(), {"s1", "1"}, 5);
  EXPECT_EQ(t.steps, std::vector<Configuration>(6, Configuration{"s1", "1"}));
}

TEST(run_closed, feedback_violation_reports_step) {
  const auto a = parse_automaton(
      "states: s\ninputs: 0\noutputs: 0 x\ntable:\ns 0 -> s x\n");
  EXPECT_NO_THROW(run_closed(a, {"s", "0"}, 1));
  try {
    run_closed(a, {"s", "0"}, 3);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos) << e.what();
  }
}

TEST(invert, table1) {
  const auto a = table1();
  const auto inv = invert(a);
  EXPECT_EQ(step(inv, {"s2", "2"}), (Configuration{"s1", "3"}));
  EXPECT_EQ(invert(inv), a);
}

TEST(invert, identity) {
  EXPECT_EQ(invert(identity_machine()), identity_machine());
}

TEST(invert, exhaustive_left_inverse) {
  for (const auto& img : revdyn::testing::all_permutations(6)) {
    const auto a = revdyn::testing::machine_from_image(img, 2, 3);
    const auto inv = invert(a);
    for (std::size_t k = 0; k < a.config_count(); ++k) {
      const auto c = a.input_config(k);
      ASSERT_EQ(step(inv, step(a, c)), c);
    }
  }
}

TEST(invert, errors) {
  const auto collide = parse_automaton(
      "states: s\ninputs: 0 1\noutputs: 0 1\ntable:\ns 0 -> s 0\ns 1 -> s 0\n");
  EXPECT_THROW(invert(collide), DomainError);
  // Injective, but onto a larger state x output set.
  const auto wide = parse_automaton(
      "states: s\ninputs: 0\noutputs: 0 1\ntable:\ns 0 -> s 1\n");
  EXPECT_TRUE(is_reversible(wide));
  EXPECT_THROW(invert(wide), DomainError);
}

TEST(undo_trajectory, orbit_and_empty_run) {
  const auto a = table1();
  EXPECT_EQ(undo_trajectory(a, run_closed(a, {"s1", "3"}, 3)), (Configuration{"s1", "3"}));
  EXPECT_EQ(undo_trajectory(a, run_closed(a, {"s2", "2"}, 0)), (Configuration{"s2", "2"}));
}

TEST(undo_trajectory, random_machines_restore_start) {
  const auto perms = revdyn::testing::all_permutations(6);
  std::mt19937 gen(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& img = perms[gen() % perms.size()];
    const auto a = revdyn::testing::machine_from_image(img, 2, 3);
    const auto c0 = a.input_config(gen() % a.config_count());
    const auto n = gen() % 21;
    ASSERT_EQ(undo_trajectory(a, run_closed(a, c0, n)), c0);
  }
}

TEST(run_open, records_outputs_and_undoes) {
  const auto a = table1();
  const std::vector<std::string> in = {"3", "1", "2", "2", "3"};
  const auto t = run_open(a, "s1", in);
  EXPECT_FALSE(t.closed_loop());
  ASSERT_EQ(t.steps.size(), 6u);
  // Replay by table lookup.
  std::string s = "s1";
  for (std::size_t k = 0; k < in.size(); ++k) {
    const auto [ns, o] = revdyn::testing::table_step(a, s, in[k]);
    EXPECT_EQ(t.steps[k + 1], (Configuration{ns, o}));
    s = ns;
  }
  EXPECT_EQ(undo_trajectory(a, t), (Configuration{"s1", "3"}));
}
