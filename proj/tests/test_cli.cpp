#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dfw/errors.hpp"
#include "plot.hpp"

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dfw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static int run(std::vector<std::string> args) {
    args.insert(args.begin(), "dfw");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return dfw::cli::main_entry(static_cast<int>(argv.size()), argv.data());
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

const char* kStudy =
    "[run]\ncommand = study-converge\n[study]\ntarget = runge\nm_list = 4, 6, 8\nn_list = 1, 2\n"
    "scale_kind = ShapeParams\nstrategy = greedy_multiscale\nnode_rule = chebyshev\ngrid_density = 201\n";

}  // namespace

TEST_F(CliTest, StudyRerunIsByteIdentical) {
  const fs::path cfg = write("study.ini", kStudy);
  ASSERT_EQ(run({cfg.string(), "-o", (dir_ / "a").string()}), 0);
  ASSERT_EQ(run({cfg.string(), "-o", (dir_ / "b").string()}), 0);
  for (const char* name : {"study.csv", "study_order.csv", "study_consistency.csv"}) {
    const std::string a = slurp(dir_ / "a" / name);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir_ / "b" / name)) << name;
  }
  const dfw::CsvTable t = dfw::read_csv(dir_ / "a" / "study.csv");
  EXPECT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.columns[0], "M");
  EXPECT_EQ(t.columns.back(), "order_row_flag");
  EXPECT_EQ(slurp(dir_ / "a" / "study.csv").rfind("# dfw ", 0), 0u);
}

TEST_F(CliTest, OverridesAndEnvironment) {
  const fs::path cfg = write("study.ini", kStudy);
  ::setenv("DFW_OUTPUT_DIR", (dir_ / "env").string().c_str(), 1);
  EXPECT_EQ(run({cfg.string(), "--set", "study.m_list=4,6"}), 0);
  ::unsetenv("DFW_OUTPUT_DIR");
  const dfw::CsvTable t = dfw::read_csv(dir_ / "env" / "study.csv");
  EXPECT_EQ(t.rows.size(), 4u);
  EXPECT_NE(slurp(dir_ / "env" / "study.csv").find("study.m_list=4 6"), std::string::npos);
}

TEST_F(CliTest, UnknownKeysAreConfigErrors) {
  const fs::path cfg = write("bad.ini", std::string(kStudy) + "colour = blue\n");
  EXPECT_EQ(run({cfg.string(), "-o", (dir_ / "out").string()}), 2);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
  const fs::path ok = write("ok.ini", kStudy);
  EXPECT_EQ(run({ok.string(), "--set", "study.bogus=1"}), 2);
  EXPECT_EQ(run({ok.string(), "--set", "study.m_list=6,4", "-o", (dir_ / "o2").string()}), 2);
  EXPECT_FALSE(fs::exists(dir_ / "o2"));
  const fs::path dup = write("dup.ini", std::string(kStudy) + "target = exp\n");
  EXPECT_EQ(run({dup.string()}), 2);
}

TEST_F(CliTest, MissingInputFileGivesNoOutputs) {
  const fs::path cfg = write("fit.ini", "[run]\ncommand = fit\n[fit]\nnodes = nowhere.txt\nsamples = nowhere.txt\n");
  EXPECT_EQ(run({cfg.string(), "-o", (dir_ / "out").string()}), 2);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, SingularFitIsNumericalFailure) {
  write("nodes.txt", "-1\n-0.5\n0\n0.5\n1\n");
  write("samples.txt", "-1 1\n-0.6 2\n-0.2 3\n0.2 3\n0.6 2\n1 1\n");
  const fs::path cfg = write("fit.ini",
                             "[run]\ncommand = fit\n[fit]\nnodes = nodes.txt\nsamples = samples.txt\n"
                             "scale_kind = ShapeParams\nscales = 1\n");
  testing::internal::CaptureStderr();
  EXPECT_EQ(run({cfg.string(), "-o", (dir_ / "out").string()}), 3);
  const std::string err = testing::internal::GetCapturedStderr();
  EXPECT_NE(err.find("condition estimate"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "fit.csv"));
}

TEST_F(CliTest, FitThenEvaluate) {
  write("nodes.txt", "-1\n-0.5\n0\n0.5\n0.9\n");
  write("samples.txt", "-1 1\n-0.6 2\n-0.2 3\n0.2 3\n0.6 2\n1 1\n");
  write("probe.txt", "-0.6\n0.3\n");
  const fs::path fit = write("fit.ini",
                             "[run]\ncommand = fit\n[fit]\nnodes = nodes.txt\nsamples = samples.txt\n"
                             "scale_kind = ShapeParams\nscales = 1\n");
  ASSERT_EQ(run({fit.string(), "-o", (dir_ / "out").string()}), 0);
  const dfw::CsvTable fitted = dfw::read_csv(dir_ / "out" / "fit.csv");
  for (const auto& row : fitted.rows) EXPECT_NEAR(row[3], 0.0, 1e-9);
  const fs::path ev = write("ev.ini", "[run]\ncommand = evaluate\n[evaluate]\nmodel = out/model.txt\npoints = probe.txt\n");
  ASSERT_EQ(run({ev.string(), "-o", (dir_ / "ev").string()}), 0);
  const dfw::CsvTable t = dfw::read_csv(dir_ / "ev" / "evaluate.csv");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_NEAR(t.rows[0][1], 2.0, 1e-9);
}

TEST_F(CliTest, UnwritableOutputIsIoError) {
  const fs::path cfg = write("study.ini", kStudy);
  write("blocker", "x");
  EXPECT_EQ(run({cfg.string(), "-o", (dir_ / "blocker" / "sub").string()}), 4);
}

TEST_F(CliTest, EveryCommandRuns) {
  write("pts2.txt", "0 0\n0.5 0.5\n1 0.25\n");
  write("layout.txt", "i 0.5 0.5\nb 0 0.5 -1 0\nb 1 0.5 1 0\nb 0.5 0 0 -1\nb 0.5 1 0 1\n");
  write("grid.txt", "1 8 6.283185307179586\n0 0.7071067811865476 1 0.7071067811865476 0 -0.7071067811865476 -1 -0.7071067811865476\n");
  write("radial.txt", "0 1\n0.25 1\n0.5 1\n0.75 1\n1 1\n");
  write("xi.txt", "0 0\n");
  const std::vector<std::pair<std::string, std::string>> configs = {
      {"kernel-eval", "[kernel]\nfamily = Gaussian\nshape = 2\n[kernel_eval]\npoints = pts2.txt\ncenter = 0, 0\n"},
      {"hermite", "[hermite]\nlayout = layout.txt\ntarget = linear\ngrid_density = 5\n"},
      {"transform", "[transform]\nkind = fractional-laplacian\norder = 2\ninput = grid.txt\n"},
      {"transform", "[transform]\nkind = abel-forward\norder = 0.5\ninput = radial.txt\n"},
      {"transform", "[transform]\nkind = weyl\ntarget = bump\ncenter = 0, 0\npoints = xi.txt\ngamma = 0.2\n"},
      {"nodes-optimize", "[nodes]\ncount = 3\niterations = 20\n"},
      {"study-edge", "[edge]\nm = 5\nrules = uniform, chebyshev\ngrid_density = 51\n"},
  };
  int i = 0;
  for (const auto& [command, body] : configs) {
    const fs::path cfg = write("c" + std::to_string(i) + ".ini", "[run]\ncommand = " + command + "\n" + body);
    EXPECT_EQ(run({cfg.string(), "-o", (dir_ / ("o" + std::to_string(i))).string()}), 0) << command;
    ++i;
  }
  const dfw::CsvTable lap = dfw::read_csv(dir_ / "o2" / "transform.csv");
  for (const auto& row : lap.rows) EXPECT_NEAR(row[2], row[1], 1e-12);
}

TEST_F(CliTest, PlotMarkers) {
  std::string csv = "# c\nx,y\n";
  for (int i = 1; i <= 10; ++i) csv += std::to_string(i) + "," + std::to_string(i * i) + "\n";
  const fs::path in = write("t.csv", csv);
  dfw::cli::emit_plot(in, {"x", {"y"}, true, true}, dir_ / "p.svg");
  const std::string svg = slurp(dir_ / "p.svg");
  std::size_t markers = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++markers;
  EXPECT_EQ(markers, 10u);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
}

TEST_F(CliTest, PlotErrors) {
  const fs::path neg = write("neg.csv", "x,y\n1,2\n2,-1\n");
  try {
    dfw::cli::emit_plot(neg, {"x", {"y"}, false, true}, dir_ / "n.svg");
    FAIL() << "expected an error";
  } catch (const dfw::InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(dir_ / "n.svg"));
  const fs::path empty = write("empty.csv", "# nothing\nx,y\n");
  EXPECT_THROW(dfw::cli::emit_plot(empty, {"x", {"y"}, false, false}, dir_ / "e.svg"), dfw::InvalidArgument);
  EXPECT_FALSE(fs::exists(dir_ / "e.svg"));
  EXPECT_THROW(dfw::cli::emit_plot(neg, {"x", {"z"}, false, false}, dir_ / "z.svg"), dfw::InvalidArgument);
  const fs::path cfg = write("plot.ini", "[run]\ncommand = plot\n[plot]\ncsv = empty.csv\nx = x\ny = y\n");
  EXPECT_EQ(run({cfg.string(), "-o", (dir_ / "out").string()}), 2);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "plot.svg"));
}
