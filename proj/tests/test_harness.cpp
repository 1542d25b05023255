#include "slabsym/errors.hpp"
#include "slabsym/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace slabsym;
namespace fs = std::filesystem;

namespace {

std::string scenario_path(const std::string& name) { return std::string(SLABSYM_SCENARIO_DIR) + "/" + name; }

nlohmann::json disk_scenario(const std::string& id, const nlohmann::json& bc) {
  return {{"id", id},
          {"H", {{"kind", "affine"}, {"H0", 0.5}, {"slope", 1.0}}},
          {"domain", {{"kind", "disk"}, {"center", {0.0, 0.0}}, {"radius", 1.0}}},
          {"bc", bc},
          {"resolution", {{"h", 1.0 / 24}, {"mesh_angular", 128}}},
          {"sweep", {{"directions", 8}}}};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string message_of(const nlohmann::json& j) {
  try {
    Scenario::from_json(j);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

const Criterion* find(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.criteria)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST(Scenario, PreconditionsAreNamed) {
  const nlohmann::json radial = {{"kind", "radial_flux"}, {"c", 0.3}, {"origin", {0.0, 0.0}}};
  const nlohmann::json contact = {{"kind", "contact_angle"}, {"gamma1", 1.0}};
  EXPECT_NE(message_of(disk_scenario("T1", radial)).find("T1 precondition"), std::string::npos);
  EXPECT_NE(message_of(disk_scenario("T4", contact)).find("T4 precondition"), std::string::npos);
  EXPECT_NE(message_of(disk_scenario("T2", contact)).find("T2 precondition"), std::string::npos);
  const nlohmann::json increasing = {{"kind", "curvature_flux"}, {"a", 0.0}, {"b", 0.5}};
  EXPECT_NE(message_of(disk_scenario("T3", increasing)).find("T3 precondition"), std::string::npos);
  const nlohmann::json flat = {{"kind", "contact_angle"}, {"gamma1", 0.0}};
  EXPECT_NE(message_of(disk_scenario("T1", flat)).find("T1 precondition"), std::string::npos);
  const fs::path dir = fs::temp_directory_path() / "slabsym_lopsided";
  fs::create_directories(dir);
  std::ofstream(dir / "c.csv") << "x,y\n0,0\n1,0\n0.8,0.3\n0.2,0.9\n";
  std::ofstream(dir / "c.json") << R"({"plate_id": 1, "alpha": {"point": [0.5, 0], "direction": [0, 1]}})";
  nlohmann::json lopsided = disk_scenario("T2", {{"kind", "fixed_boundary"}});
  lopsided["domain"] = {{"kind", "curve"}, {"csv", (dir / "c.csv").string()}, {"json", (dir / "c.json").string()}};
  EXPECT_NE(message_of(lopsided).find("T2 precondition"), std::string::npos) << message_of(lopsided);
  EXPECT_EQ(message_of(disk_scenario("T1", contact)), "");
  EXPECT_THROW(Scenario::load(scenario_path("missing.json")), IoError);
}

TEST(Scenario, ShippedFilesParse) {
  for (const char* name : {"t1.json", "t2.json", "t2_disk.json", "t3.json", "t4.json", "t1_perturbed.json",
                           "t1_profile.json", "asymmetric_dirichlet.json"}) {
    EXPECT_NO_THROW(Scenario::load(scenario_path(name))) << name;
  }
  const auto s = Scenario::load(scenario_path("t1.json"));
  EXPECT_EQ(s.id, "T1");
  EXPECT_TRUE(std::holds_alternative<ContactAngle>(s.bc));
  const auto o = s.with_overrides(7, 1.0 / 16);
  EXPECT_EQ(o.seed, 7u);
  EXPECT_EQ(o.h, 1.0 / 16);
  EXPECT_NE(o.config_hash(), s.config_hash());
  EXPECT_EQ(s.config_hash(), Scenario::load(scenario_path("t1.json")).config_hash());
  EXPECT_THROW(s.with_overrides(std::nullopt, -1.0), InvalidInput);
}

TEST(Report, EmptySkeleton) {
  const VerificationReport r;
  const auto j = r.to_json();
  EXPECT_EQ(j.at("status"), "error");
  EXPECT_TRUE(j.at("solver").is_null());
  EXPECT_TRUE(j.at("symmetry").is_null());
  EXPECT_TRUE(j.at("spot_check").is_null());
  EXPECT_TRUE(j.at("shooting_residual").is_null());
  EXPECT_TRUE(j.at("criteria").is_array());
  EXPECT_TRUE(j.at("criteria").empty());
  EXPECT_TRUE(j.contains("provenance"));
  EXPECT_FALSE(r.passed());
}

TEST(Report, SymmetricT1PassesAndIsDeterministic) {
  const nlohmann::json contact = {{"kind", "contact_angle"}, {"gamma1", std::numbers::pi / 2}};
  const auto s = Scenario::from_json(disk_scenario("T1", contact));
  RunArtifacts art;
  const auto r = run_scenario(s, &art);
  EXPECT_EQ(r.status, "pass") << r.to_json().dump(2);
  ASSERT_TRUE(r.symmetry.has_value());
  EXPECT_TRUE(r.symmetry->symmetric);
  ASSERT_TRUE(r.symmetry->axis.has_value());
  EXPECT_LE(r.symmetry->axis->point.head<2>().norm(), s.location_tol());
  ASSERT_TRUE(r.spot_check.has_value());
  EXPECT_EQ(r.spot_check->touching.conclusion, Conclusion::holds);
  for (const auto& c : r.criteria) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_EQ(r.to_json().dump(), run_scenario(s).to_json().dump());

  const fs::path root = fs::temp_directory_path() / "slabsym_harness_export";
  fs::remove_all(root);
  export_artifacts(r, art, (root / "a").string());
  export_artifacts(run_scenario(s, &art), art, (root / "b").string());
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(root / "b" / e.path().filename())) << e.path();
  }
  EXPECT_TRUE(fs::exists(root / "a" / "report.json"));
  EXPECT_TRUE(fs::exists(root / "a" / "mesh.obj"));
  EXPECT_GE(files, 4u);
}

TEST(Report, ExportToInvalidPathNamesIt) {
  const fs::path blocker = fs::temp_directory_path() / "slabsym_not_a_dir";
  std::ofstream(blocker) << "x";
  const std::string target = (blocker / "out").string();
  try {
    export_artifacts(VerificationReport{}, RunArtifacts{}, target);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(target), std::string::npos) << e.what();
  }
  EXPECT_THROW(write_json(nlohmann::json::object(), (blocker / "r.json").string()), IoError);
}

TEST(Report, AsymmetricDirichletFailsWithWitness) {
  const auto s = Scenario::load(scenario_path("asymmetric_dirichlet.json")).with_overrides(std::nullopt, 1.0 / 24);
  const auto r = run_scenario(s);
  EXPECT_EQ(r.status, "fail");
  ASSERT_TRUE(r.symmetry.has_value());
  EXPECT_FALSE(r.symmetry->symmetric);
  EXPECT_GE(r.symmetry->witness_direction, 0);
  const Criterion* dev = find(r, "symmetry_deviation");
  ASSERT_NE(dev, nullptr);
  EXPECT_FALSE(dev->passed);
}

TEST(Report, StageErrorsAreReported) {
  auto j = disk_scenario("T1", {{"kind", "contact_angle"}, {"gamma1", 1.0}});
  j["solver"] = {{"max_iterations", 1}, {"damping", "none"}};
  const auto r = run_scenario(Scenario::from_json(j));
  EXPECT_EQ(r.status, "error");
  EXPECT_EQ(r.error_stage, "solve");
  EXPECT_FALSE(r.error_message.empty());
  const auto out = r.to_json();
  EXPECT_EQ(out.at("error").at("stage"), "solve");
}
