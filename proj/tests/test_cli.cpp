#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <random>

#include "tropskel/commands.hpp"
#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"

using namespace tropskel;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(TROPSKEL_DATA_DIR) + "/" + name + ".json"; }

struct CliResult {
  int status;
  std::string out;
};

CliResult cli(const std::string& args) {
  std::string cmd = std::string(TROPSKEL_CLI) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  int st = pclose(pipe.release());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string message_of(const json& j) {
  try {
    parse_input(j);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Input, MainQuarticHasFifteenTerms) {
  InputSpec in = read_input(data("main"));
  EXPECT_EQ(in.f.terms().size(), 15u);
  EXPECT_EQ(in.f.deg_y(), 4);
  EXPECT_EQ(in.f.deg_x(), 4);
  EXPECT_EQ(asserted_genus(in), 3);
}

TEST(Input, EmptyTermListIsTheZeroPolynomial) {
  EXPECT_NE(message_of({{"f", json::array()}}).find("zero polynomial"), std::string::npos);
  // terms cancelling to zero
  json f = json::array({{{"exps", {0, 1}}, {"coeff", {{{"tpow", 0}, {"value", 1}}}}},
                        {{"exps", {0, 1}}, {"coeff", {{{"tpow", 0}, {"value", -1}}}}}});
  EXPECT_NE(message_of({{"f", f}}).find("zero polynomial"), std::string::npos);
}

TEST(Input, RenderParseFixpoint) {
  for (const char* name : {"main", "second"}) {
    InputSpec a = read_input(data(name));
    json r1 = render_input(a);
    InputSpec b = parse_input(r1);
    EXPECT_EQ(b.f.str(), a.f.str());
    EXPECT_EQ(render_input(b).dump(), r1.dump());
  }
}

// Unsorted, duplicated terms written with every rational form.
TEST(Input, RandomTermArraysRoundTrip) {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> e(0, 3), c(-9, 9), form(0, 2), den(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    json f = json::array();
    for (int k = 0; k < 6; ++k) {
      json coeff = json::array();
      for (int m = 0; m < 3; ++m) {
        int num = c(rng), d = den(rng);
        json value = form(rng) == 0   ? json(num)
                     : form(rng) == 1 ? json(std::to_string(num) + "/" + std::to_string(d))
                                      : json::array({std::to_string(num), std::to_string(d)});
        coeff.push_back({{"tpow", e(rng)}, {"value", value}});
      }
      f.push_back({{"exps", {e(rng), e(rng) + 1}}, {"coeff", coeff}});
    }
    json in = {{"variables", {"x", "y"}}, {"f", f}, {"options", {{"note", trial}}}};
    InputSpec a;
    try {
      a = parse_input(in);
    } catch (const ParseError&) {
      continue;  // everything cancelled
    }
    json r1 = render_input(a);
    InputSpec b = parse_input(r1);
    EXPECT_EQ(b.f.str(), a.f.str()) << trial;
    EXPECT_EQ(render_input(b), r1) << trial;
  }
}

TEST(Input, DiagnosticsNameTheField) {
  json bad_tpow = {{"f", json::array({{{"exps", {0, 1}}, {"coeff", {{{"tpow", "1/2"}, {"value", 1}}}}}})}};
  EXPECT_NE(message_of(bad_tpow).find("$.f[0].coeff[0].tpow"), std::string::npos);
  json algebraic = {{"f", json::array({{{"exps", {0, 1}}, {"coeff", {{{"tpow", 0}, {"value", "i + 1"}}}}}})}};
  EXPECT_NE(message_of(algebraic).find("$.f[0].coeff[0].value"), std::string::npos);
  EXPECT_NE(message_of({{"f", "y"}, {"extra", 1}}).find("$.extra"), std::string::npos);
  json reducible = {{"f", "y"}, {"constants", {{{"name", "a"}, {"minpoly", {-1, 0, 1}}}}}};
  EXPECT_NE(message_of(reducible).find("$.constants[0].minpoly"), std::string::npos);
  EXPECT_NE(message_of({{"f", "y"}, {"variables", {"u", "v"}}}).find("$.f"), std::string::npos);
  EXPECT_NE(message_of({{"f", "x^2 + t"}}).find("$.f"), std::string::npos);
  EXPECT_EQ(message_of({{"f", "y - x"}, {"constants", {{{"name", "i"}, {"minpoly", {1, 0, 1}}}}}}), "");
}

TEST(Input, ChartSpecs) {
  TreeVertex v = parse_disk("B_4(0)");
  EXPECT_EQ(v.radius, 4);
  EXPECT_TRUE(v.center.is_zero());
  TreeVertex w = parse_disk("B_{-3/2}(1 + t)");
  EXPECT_EQ(w.radius, Rational(-3, 2));
  EXPECT_TRUE(w.center.is_zero());  // truncated below the radius
  EXPECT_EQ(parse_disk("B_2(1 + t)").center.str(), "1 + t");
  Chart e = parse_annulus("S_{0,4}(0)");
  EXPECT_EQ(e.length(), 4);
  EXPECT_THROW(parse_annulus("S_{4,0}(0)"), ParseError);
  EXPECT_THROW(parse_disk("B4(0)"), ParseError);
  EXPECT_THROW(parse_disk("B_4(y)"), ParseError);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("septree " + data("main")).status, 0);
  EXPECT_EQ(cli("septree /nonexistent.json").status, 4);
  EXPECT_EQ(cli("puiseux " + data("main") + " --chart 'B_0(q)'").status, 4);
  EXPECT_EQ(cli("dedekind 'x^2 + 1' --prime 2").status, 2);
  EXPECT_EQ(cli("dedekind 'x^3 - 2' --prime 9").status, 2);
  EXPECT_EQ(cli("--max-factor-degree 1 puiseux " + data("main") + " --chart 'B_0(0)' --height 2").status, 3);
  EXPECT_EQ(cli("").status, 4);
}

TEST(Cli, OutputIsDeterministic) {
  for (const std::string& args : std::vector<std::string>{"septree " + data("main"), "puiseux " + data("main") + " --chart 'B_4(0)' --scale 2",
                                 "mixed " + data("main") + " --edge 'S_{0,4}(0)' --heights 4,2",
                                 "dedekind 'y^3 - t*(y + 1)'"}) {
    CliResult a = cli(args), b = cli(args + " --seed-free");
    EXPECT_EQ(a.status, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, Formats) {
  CliResult dot = cli("septree " + data("main") + " --format dot");
  EXPECT_EQ(dot.out.rfind("graph tree {", 0), 0u);
  json j = json::parse(cli("dedekind 'x^3 - x - 1' --prime 5").out);
  EXPECT_EQ(j["notation"], "(2)(1)");
  json m = json::parse(cli("mixed " + data("main") + " --edge 'S_{0,4}(0)' --heights 4,2").out);
  EXPECT_EQ(m["n"], 4);
  EXPECT_EQ(m["kummer_order"], 2);
  EXPECT_EQ(m["dm_orbits"].size(), 2u);
}
