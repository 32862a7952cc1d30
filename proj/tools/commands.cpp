#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "dfw/error_study.hpp"
#include "dfw/errors.hpp"
#include "dfw/io.hpp"
#include "plot.hpp"
#include "targets.hpp"

namespace dfw::cli {

namespace {

namespace fs = std::filesystem;

std::string header(const Config& cfg) { return std::string("dfw ") + kVersion + " | " + cfg.resolved(); }

std::vector<std::string> coordinate_columns(int dim, const std::string& prefix = "x") {
  std::vector<std::string> cols;
  for (int a = 1; a <= dim; ++a) cols.push_back(prefix + std::to_string(a));
  return cols;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<double> coords_of(const Eigen::MatrixXd& points, Eigen::Index p) {
  std::vector<double> row(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index a = 0; a < points.rows(); ++a) row[static_cast<std::size_t>(a)] = points(a, p);
  return row;
}

KernelSpec kernel_from(const Config& cfg) {
  KernelSpec k;
  k.family = parse_family(cfg.text("kernel.family", "MQ"));
  k.n = cfg.integer("kernel.n", 2);
  k.m = cfg.integer("kernel.m", 1);
  k.shape = cfg.real("kernel.shape", 1.0);
  k.power = cfg.real("kernel.power", 1.0);
  if (cfg.has("kernel.anisotropy")) k = k.with_anisotropy(AnisotropyTensor(read_table(cfg.path("kernel.anisotropy"))));
  k.validate();
  return k;
}

DomainBox domain_from(const Config& cfg, const std::string& section) {
  const std::vector<double> lo = cfg.reals(section + ".lower", {-1.0});
  const std::vector<double> hi = cfg.reals(section + ".upper", {1.0});
  if (lo.size() != hi.size()) throw InvalidArgument(section + ".lower and " + section + ".upper differ in length");
  return DomainBox(Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size())),
                   Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size())));
}

Eigen::VectorXd vector_of(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<OutputFile> kernel_eval(const Config& cfg) {
  const KernelSpec kernel = kernel_from(cfg);
  const Eigen::MatrixXd points = read_points(cfg.path("kernel_eval.points"));
  const Eigen::VectorXd center = vector_of(cfg.reals("kernel_eval.center"));
  const bool with_normal = cfg.has("kernel_eval.normal");
  const Eigen::VectorXd normal = with_normal ? vector_of(cfg.reals("kernel_eval.normal")) : Eigen::VectorXd();
  if (center.size() != points.rows()) throw InvalidArgument("kernel_eval.center must match the point dimension");

  std::vector<std::string> cols = concat(coordinate_columns(static_cast<int>(points.rows())), {"value"});
  if (with_normal) cols.push_back("normal_derivative");
  CsvWriter csv(header(cfg), cols);
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    std::vector<double> row = coords_of(points, p);
    row.push_back(eval_kernel(kernel, points.col(p), center));
    if (with_normal) row.push_back(kernel_normal_derivative(kernel, points.col(p), center, normal));
    csv.add_row(row);
  }
  return {{"kernel_eval.csv", csv.str()}};
}

std::vector<OutputFile> fit_command(const Config& cfg) {
  const NodeSet nodes(read_points(cfg.path("fit.nodes")));
  const Eigen::MatrixXd samples = read_table(cfg.path("fit.samples"));
  const ScaleSet scales(parse_scale_kind(cfg.text("fit.scale_kind", "ShapeParams")), cfg.reals("fit.scales", {1.0}));
  const int kernel_n = cfg.integer("fit.kernel_n", 2);
  const FitStrategy strategy = parse_strategy(cfg.text("fit.strategy", "square"));
  const std::string model_name = cfg.text("fit.model", "model.txt");
  if (samples.cols() != nodes.dim() + 1) throw InvalidArgument("fit.samples rows must hold a point and a value");

  const NodeSet eval(samples.leftCols(nodes.dim()).transpose());
  std::vector<double> data(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index i = 0; i < samples.rows(); ++i) data[static_cast<std::size_t>(i)] = samples(i, nodes.dim());
  const FitResult result = fit(nodes, scales, kernel_n, data, eval, strategy);

  CsvWriter csv(header(cfg), concat(coordinate_columns(nodes.dim()), {"data", "fitted", "residual"}));
  for (Eigen::Index i = 0; i < eval.size(); ++i) {
    std::vector<double> row = coords_of(eval.coords(), i);
    const double v = evaluate(result.model, eval.point(i));
    row.push_back(data[static_cast<std::size_t>(i)]);
    row.push_back(v);
    row.push_back(v - data[static_cast<std::size_t>(i)]);
    csv.add_row(row);
  }
  CsvWriter summary(header(cfg), {"max_residual", "condition", "condition_warning"});
  summary.add_row({result.max_residual, result.condition, result.condition_warning ? 1.0 : 0.0});
  std::ostringstream model;
  write_model(model, result.model);
  return {{"fit.csv", csv.str()}, {"fit_summary.csv", summary.str()}, {model_name, model.str()}};
}

std::vector<OutputFile> evaluate_command(const Config& cfg) {
  const DfwModel model = load_model(cfg.path("evaluate.model"));
  const Eigen::MatrixXd points = read_points(cfg.path("evaluate.points"));
  CsvWriter csv(header(cfg), concat(coordinate_columns(static_cast<int>(points.rows())), {"value"}));
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    std::vector<double> row = coords_of(points, p);
    row.push_back(evaluate(model, points.col(p)));
    csv.add_row(row);
  }
  return {{"evaluate.csv", csv.str()}};
}

std::vector<OutputFile> hermite_command(const Config& cfg) {
  const KernelSpec kernel = kernel_from(cfg);
  const BoundarySpec layout = read_boundary_layout(cfg.path("hermite.layout"));
  const TargetFunction target = make_target(cfg.text("hermite.target", "exp"));
  const int density = cfg.integer("hermite.grid_density", default_samples_per_axis(layout.dim()));

  std::vector<double> interior;
  std::vector<double> dirichlet;
  std::vector<double> neumann;
  for (Eigen::Index i = 0; i < layout.interior_count(); ++i) interior.push_back(target.value(layout.interior().col(i)));
  for (Eigen::Index i = 0; i < layout.boundary_count(); ++i) {
    dirichlet.push_back(target.value(layout.boundary().col(i)));
    neumann.push_back(target.grad(layout.boundary().col(i)).dot(layout.normals().col(i)));
  }
  const HermiteFit fitted = fit_hermite(layout, kernel, interior, dirichlet, neumann);
  const double defect = assemble_hermite(layout, kernel).symmetry_defect;

  const Eigen::MatrixXd all = layout.all_nodes();
  const DomainBox box(all.rowwise().minCoeff(), all.rowwise().maxCoeff());
  const Eigen::MatrixXd grid = box.grid(density);
  CsvWriter csv(header(cfg), concat(coordinate_columns(layout.dim()), {"value", "target", "error"}));
  double max_err = 0.0;
  double sq = 0.0;
  for (Eigen::Index p = 0; p < grid.cols(); ++p) {
    std::vector<double> row = coords_of(grid, p);
    const double v = evaluate_hermite(fitted.model, grid.col(p));
    const double t = target.value(grid.col(p));
    row.push_back(v);
    row.push_back(t);
    row.push_back(std::abs(v - t));
    max_err = std::max(max_err, std::abs(v - t));
    sq += (v - t) * (v - t);
    csv.add_row(row);
  }
  CsvWriter summary(header(cfg), {"constraints", "max_residual", "condition", "symmetry_defect", "max_err", "rms_err"});
  summary.add_row({static_cast<double>(fitted.model.beta().size()), fitted.max_residual, fitted.condition, defect, max_err,
                   std::sqrt(sq / static_cast<double>(grid.cols()))});
  return {{"hermite.csv", csv.str()}, {"hermite_summary.csv", summary.str()}};
}

RadialSamples read_radial(const fs::path& path) {
  const Eigen::MatrixXd t = read_table(path);
  if (t.cols() != 2) throw InvalidArgument(path.string() + ": radial samples need two columns (t, value)");
  RadialSamples s;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    s.abscissae.push_back(t(i, 0));
    s.values.push_back(t(i, 1));
  }
  s.validate();
  return s;
}

std::vector<OutputFile> grid_output(const Config& cfg, const GridFunction& in, const GridFunction& out) {
  CsvWriter csv(header(cfg), concat(coordinate_columns(in.dims()), {"input", "output"}));
  for (std::size_t p = 0; p < in.size(); ++p) {
    const Point x = in.point(p);
    std::vector<double> row(x.data(), x.data() + x.size());
    row.push_back(in.values()[p]);
    row.push_back(out.values()[p]);
    csv.add_row(row);
  }
  return {{"transform.csv", csv.str()}};
}

std::vector<OutputFile> transform_command(const Config& cfg) {
  const std::string kind = cfg.text("transform.kind");
  if (kind == "fractional-laplacian" || kind == "riesz" || kind == "poisson-extension") {
    const GridFunction in = read_grid(cfg.path("transform.input"));
    const double order = cfg.real("transform.order");
    if (kind == "fractional-laplacian") return grid_output(cfg, in, fractional_laplacian(in, order));
    if (kind == "poisson-extension") return grid_output(cfg, in, poisson_extension(in, order));
    const std::string method = cfg.text("transform.method", "spectral");
    if (method != "spectral" && method != "direct") throw InvalidArgument("transform.method must be spectral or direct");
    return grid_output(cfg, in,
                       riesz_potential(in, order, method == "spectral" ? RieszMethod::Spectral : RieszMethod::Direct));
  }
  if (kind == "abel-forward" || kind == "abel-backward") {
    const RadialSamples in = read_radial(cfg.path("transform.input"));
    const double beta = cfg.real("transform.order");
    const RadialSamples out = kind == "abel-forward" ? abel_forward(in, beta) : abel_backward(in, beta);
    CsvWriter csv(header(cfg), {"t", "input", "output"});
    for (std::size_t i = 0; i < in.values.size(); ++i) csv.add_row({in.abscissae[i], in.values[i], out.values[i]});
    return {{"transform.csv", csv.str()}};
  }
  if (kind == "weyl" || kind == "radon" || kind == "radon-surface" || kind == "laplace-potential" ||
      kind == "laplace-second-form") {
    const Eigen::VectorXd center = vector_of(cfg.reals("transform.center"));
    const SupportedFunction f = make_supported(cfg.text("transform.target", "bump"), center, cfg.real("transform.radius", 1.0));
    const Eigen::MatrixXd xi = read_points(cfg.path("transform.points"));
    const double gamma = cfg.real("transform.gamma", 0.0);
    const int n = cfg.integer("transform.n", static_cast<int>(center.size()));
    RadialQuadratureSpec quad;
    quad.annuli = cfg.integer("transform.annuli", quad.annuli);
    quad.radial_points = cfg.integer("transform.radial_points", quad.radial_points);
    quad.angular_points = cfg.integer("transform.angular_points", quad.angular_points);
    quad.polar_points = cfg.integer("transform.polar_points", quad.polar_points);
    if (xi.rows() != center.size()) throw InvalidArgument("transform.points must match the dimension of transform.center");
    CsvWriter csv(header(cfg), concat(coordinate_columns(static_cast<int>(xi.rows()), "xi"), {"value"}));
    for (Eigen::Index p = 0; p < xi.cols(); ++p) {
      double v = 0.0;
      if (kind == "weyl") v = weyl_transform(f, xi.col(p), gamma, n, quad);
      else if (kind == "radon") v = radon_dfw(f, xi.col(p), gamma, n, quad);
      else if (kind == "radon-surface") v = radon_dfw_surface_form(f, xi.col(p), gamma, n, quad);
      else if (kind == "laplace-potential") v = laplace_potential_dfw(f, xi.col(p), n, quad);
      else v = laplace_potential_second_form(f, xi.col(p), n, quad);
      std::vector<double> row = coords_of(xi, p);
      row.push_back(v);
      csv.add_row(row);
    }
    return {{"transform.csv", csv.str()}};
  }
  throw InvalidArgument("unknown transform.kind '" + kind + "'");
}

std::vector<OutputFile> nodes_optimize(const Config& cfg) {
  const DomainBox domain = domain_from(cfg, "nodes");
  const int count = cfg.integer("nodes.count", 5);
  const NodeRule initial = parse_node_rule(cfg.text("nodes.initial", "uniform"));
  const int iterations = cfg.integer("nodes.iterations", 200);
  const int samples = cfg.integer("nodes.samples_per_axis", 0);
  const std::uint64_t seed = cfg.seed();
  if (initial == NodeRule::Optimized) throw InvalidArgument("nodes.initial must be uniform or chebyshev");

  const NodeSet start = make_nodes(initial, domain, count);
  const MinMaxResult result = optimize_minmax(start, domain, iterations, seed, samples);
  CsvWriter nodes_csv(header(cfg), coordinate_columns(domain.dim()));
  for (Eigen::Index k = 0; k < result.nodes.size(); ++k) nodes_csv.add_row(coords_of(result.nodes.coords(), k));
  CsvWriter trace(header(cfg), {"iteration", "max_omega"});
  for (std::size_t i = 0; i < result.trace.size(); ++i) trace.add_row({static_cast<double>(i), result.trace[i]});
  const int dense = samples > 0 ? samples : default_samples_per_axis(domain.dim());
  CsvWriter summary(header(cfg), {"initial_max_omega", "final_max_omega", "chebyshev_max_omega"});
  const double cheb = domain.dim() == 1
                          ? max_omega(make_nodes(NodeRule::Chebyshev, domain, count), domain, dense)
                          : std::nan("");
  summary.add_row({result.trace.front(), result.trace.back(), cheb});
  return {{"nodes.csv", nodes_csv.str()}, {"nodes_trace.csv", trace.str()}, {"nodes_summary.csv", summary.str()}};
}

StudySpec study_from(const Config& cfg, const std::string& section) {
  StudySpec spec;
  spec.target = make_target(cfg.text(section + ".target", "runge")).value;
  spec.domain = domain_from(cfg, section);
  spec.scale_kind = parse_scale_kind(cfg.text(section + ".scale_kind", "ShapeParams"));
  spec.shape_base = cfg.real(section + ".shape_base", 1.0);
  spec.kernel_n = cfg.integer(section + ".kernel_n", 2);
  spec.strategy = parse_strategy(cfg.text(section + ".strategy", "square"));
  spec.grid_density = cfg.integer(section + ".grid_density", 0);
  spec.optimize_iterations = cfg.integer(section + ".optimize_iterations", 200);
  spec.seed = cfg.seed();
  return spec;
}

std::vector<OutputFile> study_converge(const Config& cfg) {
  StudySpec spec = study_from(cfg, "study");
  spec.m_list = cfg.integers("study.m_list");
  spec.n_list = cfg.integers("study.n_list");
  spec.node_rule = parse_node_rule(cfg.text("study.node_rule", "uniform"));
  spec.deriv_bound = cfg.real("study.deriv_bound", 1.0);
  const ConvergenceRecord record = run_convergence(spec);

  CsvWriter rows(header(cfg), {"M", "N", "ok", "max_err", "rms_err", "cond", "data_residual", "conjecture_shape",
                               "order_row_flag"});
  for (const auto& r : record.rows) {
    const bool used = r.ok && r.max_err > 0.0 && record.order_by_n.count(r.n);
    const double nan = std::nan("");
    if (r.ok) {
      rows.add_row({static_cast<double>(r.m), static_cast<double>(r.n), 1.0, r.max_err, r.rms_err, r.condition,
                    r.data_residual, r.conjecture_shape, used ? 1.0 : 0.0});
    } else {
      rows.add_row({static_cast<double>(r.m), static_cast<double>(r.n), 0.0, nan, nan, nan, nan, nan, 0.0});
    }
    if (!r.ok) std::cerr << "study row M=" << r.m << " N=" << r.n << " failed: " << r.error << '\n';
  }
  CsvWriter order(header(cfg), {"N", "order", "r2", "points"});
  for (const auto& [n, est] : record.order_by_n) {
    order.add_row({static_cast<double>(n), est.slope, est.r2, static_cast<double>(est.points)});
  }
  CsvWriter consistency(header(cfg), {"log_c", "rms_log_residual", "rows_used"});
  consistency.add_row({record.consistency.log_c, record.consistency.rms_log_residual,
                       static_cast<double>(record.consistency.rows_used)});
  return {{"study.csv", rows.str()}, {"study_order.csv", order.str()}, {"study_consistency.csv", consistency.str()}};
}

std::vector<OutputFile> study_edge(const Config& cfg) {
  StudySpec spec = study_from(cfg, "edge");
  const int m = cfg.integer("edge.m", 11);
  const int n = cfg.integer("edge.n", 1);
  const std::vector<std::string> rules = cfg.words("edge.rules", {"uniform", "chebyshev"});
  const int density = spec.grid_density > 0 ? spec.grid_density : default_samples_per_axis(spec.domain.dim());
  spec.m_list = {m};
  spec.n_list = {n};
  const bool with_hermite = cfg.has("edge.layout");

  std::vector<ErrorProfile> profiles;
  std::vector<double> conditions;
  for (const auto& name : rules) {
    spec.node_rule = parse_node_rule(name);
    const StudyFit study = fit_study_row(spec, m, n);
    profiles.push_back(error_map(study.fit.model, spec.target, spec.domain, density));
    conditions.push_back(study.fit.condition);
  }
  std::vector<std::string> cols = coordinate_columns(spec.domain.dim());
  for (const auto& name : rules) cols.push_back("err_" + name);
  cols.push_back("in_band");

  std::vector<OutputFile> out;
  if (with_hermite) {
    const KernelSpec kernel = kernel_from(cfg);
    const BoundarySpec layout = read_boundary_layout(cfg.path("edge.layout"));
    const double band = cfg.real("edge.band_width");
    const TargetFunction target = make_target(cfg.text("edge.target", "runge"));
    const EdgeEffectResult edge = edge_effect_ratio(target, layout, kernel, band, density);
    CsvWriter h(header(cfg), {"ratio", "plain_band_rms", "hermite_band_rms"});
    h.add_row({edge.ratio, edge.plain_band_rms, edge.hermite_band_rms});
    out.push_back({"edge_hermite.csv", h.str()});
  }

  CsvWriter field(header(cfg), cols);
  const Eigen::MatrixXd& samples = profiles.front().samples;
  for (Eigen::Index p = 0; p < samples.cols(); ++p) {
    std::vector<double> row = coords_of(samples, p);
    for (const auto& prof : profiles) row.push_back(prof.errors[p]);
    row.push_back(profiles.front().in_band[static_cast<std::size_t>(p)] ? 1.0 : 0.0);
    field.add_row(row);
  }
  CsvWriter summary(header(cfg), {"rule", "max_err", "band_max", "band_rms", "band_median", "interior_max",
                                  "interior_rms", "interior_median", "missing", "cond"});
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const ErrorProfile& p = profiles[i];
    summary.add_text_row({rules[i], format_double(p.max_err), format_double(p.band_max), format_double(p.band_rms),
                          format_double(p.band_median), format_double(p.interior_max), format_double(p.interior_rms),
                          format_double(p.interior_median), std::to_string(p.missing), format_double(conditions[i])});
  }
  out.insert(out.begin(), {{"edge_field.csv", field.str()}, {"edge_summary.csv", summary.str()}});
  return out;
}

std::vector<OutputFile> plot_command(const Config& cfg) {
  PlotRequest req;
  const fs::path csv = cfg.path("plot.csv");
  req.x = cfg.text("plot.x");
  req.y = cfg.words("plot.y", {});
  req.log_x = cfg.flag("plot.log_x", false);
  req.log_y = cfg.flag("plot.log_y", false);
  const std::string name = cfg.text("plot.output", "plot.svg");
  return {{name, render_plot(read_csv(csv), req)}};
}

fs::path output_dir(const Config& cfg) {
  if (cfg.has("run.output_dir")) return cfg.text("run.output_dir");
  if (const char* env = std::getenv("DFW_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "dfw_out";
}

// Fails early when the output directory can never be created, without
// creating anything yet.
void check_dir(const fs::path& dir) {
  fs::path p = fs::absolute(dir);
  while (!fs::exists(p) && p.has_parent_path() && p.parent_path() != p) p = p.parent_path();
  if (!fs::is_directory(p)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

}  // namespace

std::vector<std::string> command_names() {
  return {"kernel-eval", "fit",           "evaluate",     "hermite", "transform",
          "nodes-optimize", "study-converge", "study-edge", "plot"};
}

std::vector<OutputFile> run_command(const std::string& command, const Config& config) {
  if (command == "kernel-eval") return kernel_eval(config);
  if (command == "fit") return fit_command(config);
  if (command == "evaluate") return evaluate_command(config);
  if (command == "hermite") return hermite_command(config);
  if (command == "transform") return transform_command(config);
  if (command == "nodes-optimize") return nodes_optimize(config);
  if (command == "study-converge") return study_converge(config);
  if (command == "study-edge") return study_edge(config);
  if (command == "plot") return plot_command(config);
  throw InvalidArgument("unknown command '" + command + "'");
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Distance-function-wavelet experiments"};
  app.set_version_flag("--version", kVersion);
  std::string config_path;
  std::vector<std::string> overrides;
  std::string command;
  std::string out_dir;
  std::string seed;
  app.add_option("config", config_path, "INI experiment config");
  app.add_option("-c,--command", command, "Overrides run.command");
  app.add_option("-o,--output-dir", out_dir, "Overrides run.output_dir");
  app.add_option("--seed", seed, "Overrides run.seed");
  app.add_option("-s,--set", overrides, "section.key=value override (repeatable)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = Config::load(config_path);
    for (const auto& o : overrides) cfg.set(o);
    if (!command.empty()) cfg.set("run.command=" + command);
    if (!out_dir.empty()) cfg.set("run.output_dir=" + out_dir);
    if (!seed.empty()) cfg.set("run.seed=" + seed);
    cfg.check_paths();

    const std::string cmd = cfg.text("run.command");
    const fs::path dir = output_dir(cfg);
    check_dir(dir);
    const std::vector<OutputFile> outputs = run_command(cmd, cfg);
    prepare_dir(dir);
    for (const auto& file : outputs) {
      if (fs::path(file.name).has_parent_path() || file.name.empty()) {
        throw InvalidArgument("output name '" + file.name + "' must be a plain file name");
      }
    }
    for (const auto& file : outputs) write_text_file(dir / file.name, file.content);
    for (const auto& file : outputs) std::cout << (dir / file.name).string() << '\n';
    return 0;
  } catch (const IllConditionedError& e) {
    std::cerr << "numerical error: " << e.what() << "\ncondition estimate: " << format_double(e.condition()) << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dfw::cli
