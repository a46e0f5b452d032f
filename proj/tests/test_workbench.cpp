#include <qs/workbench.hpp>

#include <gtest/gtest.h>

using namespace qs;
using namespace qs::wb;

namespace {

RunConfig config(const Settings& s, const std::string& cmd) { return make_config(s, cmd); }

Settings small_slopes(int k, const std::string& h) {
  return {{"p", "3"}, {"k", std::to_string(k)}, {"trunc-M", "12"}, {"prec-N", "30"}, {"h", h}};
}

const CommandResult& weight_two() {
  static const CommandResult r = cmd_slopes(config(small_slopes(2, "2"), "slopes"));
  return r;
}

/// Replace one digit of the first multi-digit coefficient.
Json tamper(Json doc) {
  for (auto& c : doc["results"]["char_series"]["coefficients"]) {
    std::string d = c["digits"].get<std::string>();
    if (d.size() < 3) continue;
    d[d.size() - 2] = d[d.size() - 2] == '0' ? '1' : '0';
    c["digits"] = d;
    return doc;
  }
  ADD_FAILURE() << "nothing to tamper with";
  return doc;
}

}  // namespace

TEST(Config, LayersAndValidation) {
  const Settings file = parse_config_text("# run\np = 3\nk=4\ntrunc-M = 20\nh = 2.9\n");
  const Settings env{{"trunc-M", "30"}};
  const Settings flags{{"trunc-M", "25"}, {"ops", "T5,T_7"}};
  const RunConfig c = config(merge({file, env, flags}), "slopes");
  EXPECT_EQ(c.M, 25);
  EXPECT_EQ(*c.k, 4);
  EXPECT_EQ(c.ops, (std::vector<std::string>{"T_5", "T_7"}));
  EXPECT_EQ(c.slope_bound(), mpq_class(29, 10));
  EXPECT_EQ(config(merge({file, env}), "slopes").M, 30);
  EXPECT_EQ(env_name("trunc-M"), "QS_TRUNC_M");
  const Settings from_env = read_environment([](const char* n) -> const char* { return std::string(n) == "QS_PREC_N" ? "44" : nullptr; });
  EXPECT_EQ(from_env.at("prec-N"), "44");
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config({{"p", "2"}, {"k", "4"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"p", "9"}, {"k", "4"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"p", "3"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k", "8"}, {"trunc-M", "4"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k", "4"}, {"v", "2"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k", "4"}, {"h", "abc"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k", "4"}, {"ops", "T3"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k", "4"}, {"ops", "T2"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k", "4"}, {"ops", "U5"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k", "4"}, {"ops", "X5"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k", "4"}, {"trunc-M", "12x"}}, "slopes"), ConfigError);
  EXPECT_THROW(config({{"k0", "4"}, {"weights", "5"}}, "family"), ConfigError);
  EXPECT_THROW(config({}, "family"), ConfigError);
  EXPECT_THROW(parse_config_text("colour = red"), ConfigError);
  EXPECT_THROW(parse_config_text("p 3"), ConfigError);
}

TEST(Serialization, PadicRoundTrip) {
  const std::vector<Padic> xs{Padic(3, 20, 7), Padic(3, 20, -18), Padic(3, 20, 1).shifted(-2), Padic::zero(3, 20),
                              Padic::zero(3, 20, 5), Padic(3, 20, 5).with_absprec(4)};
  for (const auto& x : xs) {
    const Json j = to_json(x);
    EXPECT_TRUE(padic_from_json(j, 3, 20) == x) << x.to_string();
  }
  EXPECT_EQ(to_json(Padic(3, 5, 10)).dump(), R"({"valuation":0,"digits":"00101","precision":5})");
  EXPECT_THROW(padic_from_json(Json::parse(R"({"valuation":0,"digits":"001","precision":5})"), 3, 5), ConfigError);
}

TEST(Slopes, WeightTwoHasTheConstantFunction) {
  const CommandResult& r = weight_two();
  EXPECT_EQ(r.exit_code, kOk) << r.document["results"]["verdict"].dump();
  const Json& s = r.document["results"]["slopes"];
  ASSERT_GE(s.size(), 1u);
  bool found = false;
  for (const auto& e : s) found = found || (e["slope"] == "1" && e["multiplicity"].get<int>() >= 1);
  EXPECT_TRUE(found) << s.dump();
  EXPECT_EQ(r.document["schema_version"], kSchemaVersion);
  EXPECT_EQ(r.document["metadata"]["config"]["trunc-M"], "12");
}

TEST(Slopes, ClassicalComparePasses) {
  const CommandResult r = cmd_slopes(config({{"k", "4"}, {"trunc-M", "20"}, {"prec-N", "40"}, {"h", "2.9"}}, "slopes"));
  EXPECT_EQ(r.document["results"]["classical_compare"]["verdict"], "PASS");
  EXPECT_EQ(r.exit_code, kOk);
  EXPECT_EQ(r.document["results"]["hecke"]["dimension"], 1);
}

TEST(Documents, DeterministicAndRoundTrips) {
  const CommandResult again = cmd_slopes(config(small_slopes(2, "2"), "slopes"));
  EXPECT_EQ(document_hash(again.document), document_hash(weight_two().document));
  EXPECT_EQ(serialize(hashed_region(again.document)), serialize(hashed_region(weight_two().document)));
  const Json back = parse_document(serialize(weight_two().document));
  EXPECT_EQ(back, weight_two().document);
  EXPECT_THROW(parse_document("{\"schema_version\": "), ConfigError);
}

TEST(Verify, FreshDocumentPasses) {
  const CommandResult v = cmd_verify(weight_two().document);
  EXPECT_EQ(v.exit_code, kOk) << v.document.dump(1);
}

TEST(Verify, TamperedDigitFails) {
  const Json bad = tamper(weight_two().document);
  const CommandResult v = cmd_verify(bad);
  EXPECT_EQ(v.exit_code, kInvalid);
  // Also caught without the hash.
  Json resealed = bad;
  seal(resealed);
  const CommandResult v2 = cmd_verify(resealed);
  EXPECT_EQ(v2.exit_code, kInvalid) << v2.document.dump(1);
}

TEST(Verify, OtherTruncationPasses) {
  Settings s = small_slopes(2, "2");
  s["trunc-M"] = "16";
  const CommandResult r = cmd_slopes(config(s, "slopes"));
  EXPECT_EQ(cmd_verify(parse_document(serialize(r.document))).exit_code, kOk);
}

TEST(Verify, RejectsMalformedDocuments) {
  EXPECT_THROW(cmd_verify(Json::parse("{}")), ConfigError);
  EXPECT_THROW(cmd_verify(Json::parse(R"({"schema_version": 99})")), ConfigError);
  Json d = weight_two().document;
  d["results"].erase("char_series");
  EXPECT_THROW(cmd_verify(d), ConfigError);
}

TEST(Family, EmptyListGivesChartOnly) {
  const CommandResult r = cmd_family(config({{"k0", "4"}, {"width", "6"}, {"trunc-M", "12"}, {"prec-N", "40"}, {"h", "2"}}, "family"));
  EXPECT_EQ(r.exit_code, kOk);
  EXPECT_TRUE(r.document["results"]["specializations"].empty());
  EXPECT_EQ(r.document["results"]["chart"]["degree"], 1);
  EXPECT_EQ(cmd_verify(r.document).exit_code, kOk);
}

TEST(Family, RepeatedCentreWeightAgrees) {
  const CommandResult r =
      cmd_family(config({{"k0", "4"}, {"width", "6"}, {"trunc-M", "12"}, {"prec-N", "40"}, {"h", "2"}, {"weights", "4,4"}}, "family"));
  EXPECT_EQ(r.exit_code, kOk);
  ASSERT_EQ(r.document["results"]["specializations"].size(), 2u);
  for (const auto& e : r.document["results"]["specializations"]) EXPECT_TRUE(e["equal"].get<bool>());
  EXPECT_EQ(cmd_verify(r.document).exit_code, kOk);
}

TEST(Charpoly, ClassicalPolynomials) {
  const CommandResult r = cmd_charpoly(config({{"k", "6"}, {"trunc-M", "10"}, {"prec-N", "30"}, {"ops", "T5,T7,S5"}}, "charpoly"));
  EXPECT_EQ(r.exit_code, kOk);
  const Json& polys = r.document["results"]["classical_char_polys"];
  EXPECT_TRUE(polys.contains("U_3") && polys.contains("T_5") && polys.contains("T_7"));
  // S_5 acts by 5^(k-2) = 625: char poly (1 - 625 X)^d.
  const int d = r.document["results"]["classical_dim"].get<int>();
  ASSERT_EQ(polys["S_5"].size(), static_cast<std::size_t>(d) + 1);
  if (d == 1) {
    EXPECT_TRUE(padic_from_json(polys["S_5"][1], 3, 30) == Padic(3, 30, -625));
  }
  EXPECT_EQ(cmd_verify(r.document).exit_code, kOk);
}

TEST(Bgg, CheckPasses) {
  const CommandResult r = cmd_bgg_check(config({{"k", "4"}, {"trunc-M", "16"}, {"prec-N", "40"}}, "bgg-check"));
  EXPECT_EQ(r.exit_code, kOk) << r.document.dump(1);
  EXPECT_EQ(cmd_verify(r.document).exit_code, kOk);
  EXPECT_THROW(config({{"k", "4"}, {"trunc-M", "3"}}, "bgg-check"), ConfigError);
}
