// Batch front end: reads shape/perturbation JSON, runs named experiments,
// writes CSV/JSON artifacts plus a run manifest with content hashes.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "steklov/assemble.hpp"
#include "steklov/errors.hpp"
#include "steklov/json_io.hpp"
#include "steklov/mesh.hpp"
#include "steklov/oracle.hpp"
#include "steklov/runtime.hpp"
#include "steklov/shapegrad.hpp"
#include "steklov/spectrum.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace steklov;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

class RunWriter {
 public:
  explicit RunWriter(std::string out_dir) : dir_(std::move(out_dir)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = fs::path(dir_) / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw BadInputError("cannot write output file: " + p.string());
    os << content;
    os.close();
    char hash[32];
    std::snprintf(hash, sizeof(hash), "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(content)));
    outputs_.push_back({{"path", name}, {"fnv1a64", hash}});
  }

  template <typename F>
  auto stage(const std::string& name, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      timings_[name] = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0).count();
    } else {
      auto value = fn();
      timings_[name] = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0).count();
      return value;
    }
  }

  void finish(const std::string& command, const json& config, const DiskMesh* mesh) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["version"] = kVersion;
    if (mesh) {
      manifest["mesh"] = {{"level", mesh->refinement_level},
                          {"vertices", mesh->num_vertices()},
                          {"triangles", mesh->num_triangles()},
                          {"boundary_edges", static_cast<int>(mesh->boundary_edges.size())}};
    }
    manifest["timings_ms"] = timings_;
    manifest["outputs"] = outputs_;
    const fs::path p = fs::path(dir_) / "run_manifest.json";
    std::ofstream os(p, std::ios::binary);
    os << manifest.dump(2) << "\n";
  }

 private:
  std::string dir_;
  json outputs_ = json::array();
  std::map<std::string, double> timings_;
};

struct Options {
  std::string shape_path;
  std::string pert_path;
  std::string out_dir;
  int level = 5;
  int k = 0;  // 0: auto
  std::string cluster = "1";
  int h = 1;
  std::string normalization = "sobolev";
  std::string constraint = "volume";
  int steps = 200;
  double step_size = 0.5;
  int max_mode = 0;
  double eps0 = 1e-3;
  int fd_levels = 3;
  double cluster_tol = kClusterTol;
  double sep_tol = kSepTol;
  long seed = 0;
  bool dump_mesh = false;
};

std::vector<int> parse_cluster(const std::string& text) {
  std::vector<int> F;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      F.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw BadInputError("cluster must be a comma-separated list of indices: " + text);
    }
  }
  if (F.empty()) throw BadInputError("cluster index set is empty");
  for (std::size_t i = 1; i < F.size(); ++i)
    if (F[i] != F[i - 1] + 1)
      throw BadInputError("cluster index set must be contiguous and ascending");
  if (F.front() < 1) throw BadInputError("cluster indices are 1-based");
  return F;
}

Normalization parse_normalization(const std::string& s) {
  if (s == "sobolev") return Normalization::SOBOLEV;
  if (s == "boundary") return Normalization::BOUNDARY;
  throw BadInputError("normalization must be 'sobolev' or 'boundary'");
}

Constraint parse_constraint(const std::string& s) {
  if (s == "volume") return Constraint::VOLUME;
  if (s == "perimeter") return Constraint::PERIMETER;
  throw BadInputError("constraint must be 'volume' or 'perimeter'");
}

void validate_common(const Options& opt, const std::vector<int>& F, bool needs_cluster) {
  if (opt.level < 2 || opt.level > 7)
    throw BadInputError("level must lie in [2, 7]");
  if (opt.k != 0 && opt.k < 1) throw BadInputError("k must be >= 1");
  if (needs_cluster && opt.k != 0 && opt.k <= F.back())
    throw BadInputError("k must exceed max(F) so the cluster gap can be certified");
}

int effective_k(const Options& opt, const std::vector<int>& F) {
  if (opt.k != 0) return opt.k;
  return std::max(6, F.back() + 2);
}

json config_echo(const std::string& command, const Options& opt, const std::vector<int>& F,
                 int k) {
  json j;
  j["command"] = command;
  if (!opt.shape_path.empty()) j["shape"] = opt.shape_path;
  if (!opt.pert_path.empty()) j["pert"] = opt.pert_path;
  j["level"] = opt.level;
  j["k"] = k;
  j["cluster"] = F;
  j["h"] = opt.h;
  j["normalization"] = opt.normalization;
  j["constraint"] = opt.constraint;
  j["steps"] = opt.steps;
  j["step_size"] = opt.step_size;
  j["max_mode"] = opt.max_mode;
  j["eps0"] = opt.eps0;
  j["fd_levels"] = opt.fd_levels;
  j["cluster_tol"] = opt.cluster_tol;
  j["sep_tol"] = opt.sep_tol;
  j["seed"] = opt.seed;
  j["out"] = opt.out_dir;
  j["threads"] = thread_budget();
  return j;
}

struct Solved {
  std::shared_ptr<const DiskMesh> mesh;
  std::shared_ptr<AssembledPencil> pencil;
  SpectralResult result;
};

Solved solve_shape(RunWriter& run, const Options& opt, int k) {
  Solved s;
  const ShapeSpec shape = load_shape(opt.shape_path);
  s.mesh = run.stage("mesh", [&] {
    return std::make_shared<const DiskMesh>(build_disk_mesh(opt.level));
  });
  s.pencil = run.stage("assemble", [&] {
    return std::make_shared<AssembledPencil>(assemble(s.mesh, DiffeoMap(shape)));
  });
  s.result = run.stage("solve", [&] { return solve_pencil(s.pencil, k); });
  return s;
}

std::string spectrum_csv(const SpectralResult& result) {
  std::string csv = "index,lambda\n";
  for (int j = 0; j < result.count(); ++j)
    csv += std::to_string(j + 1) + "," + fmt17(result.lambdas[j]) + "\n";
  return csv;
}

std::string density_csv(const GradientDensity& d) {
  std::string csv = "t,H,w,v2_sum,gradT2_sum,g\n";
  for (int i = 0; i < d.num_nodes(); ++i) {
    csv += fmt17(d.t[i]) + "," + fmt17(d.H[i]) + "," + fmt17(d.w[i]) + "," +
           fmt17(d.v2_sum[i]) + "," + fmt17(d.gradT2_sum[i]) + "," + fmt17(d.g[i]) + "\n";
  }
  return csv;
}

int cmd_spectrum(const Options& opt) {
  RunWriter run(opt.out_dir);
  const int k = opt.k != 0 ? opt.k : 6;
  if (opt.k != 0 && opt.k < 1) throw BadInputError("k must be >= 1");
  if (opt.level < 2 || opt.level > 7) throw BadInputError("level must lie in [2, 7]");
  Solved s = solve_shape(run, opt, k);
  run.stage("write", [&] {
    run.write("spectrum.csv", spectrum_csv(s.result));
    if (opt.dump_mesh) {
      std::ostringstream ss;
      s.mesh->dump(ss);
      run.write("mesh.txt", ss.str());
    }
  });
  run.finish("spectrum", config_echo("spectrum", opt, {}, k), s.mesh.get());
  return 0;
}

int cmd_symfun(const Options& opt) {
  RunWriter run(opt.out_dir);
  const std::vector<int> F = parse_cluster(opt.cluster);
  validate_common(opt, F, true);
  const int k = effective_k(opt, F);
  Solved s = solve_shape(run, opt, k);
  const EigenCluster cluster = run.stage("cluster", [&] {
    return detect_cluster(s.result, F, opt.cluster_tol, opt.sep_tol);
  });
  const std::vector<double> lam = sym_functions(cluster);
  std::string csv = "h,Lambda\n";
  for (std::size_t h = 0; h < lam.size(); ++h)
    csv += std::to_string(h + 1) + "," + fmt17(lam[h]) + "\n";
  run.stage("write", [&] { run.write("symfun.csv", csv); });
  run.finish("symfun", config_echo("symfun", opt, F, k), s.mesh.get());
  return 0;
}

int cmd_shape_grad(const Options& opt) {
  RunWriter run(opt.out_dir);
  const std::vector<int> F = parse_cluster(opt.cluster);
  validate_common(opt, F, true);
  const int k = effective_k(opt, F);
  const Normalization norm = parse_normalization(opt.normalization);
  const PerturbSpec pert = load_perturb(opt.pert_path);
  Solved s = solve_shape(run, opt, k);
  const EigenCluster cluster = run.stage("cluster", [&] {
    return detect_cluster(s.result, F, opt.cluster_tol, opt.sep_tol);
  });
  const double value = run.stage("derivative", [&] {
    return hadamard_derivative(cluster, opt.h, pert, norm);
  });
  const GradientDensity density = run.stage("density", [&] {
    return boundary_density(cluster);
  });
  json out;
  out["value"] = value;
  out["F"] = F;
  out["h"] = opt.h;
  out["normalization"] = opt.normalization;
  out["lambda_F"] = cluster.lambda_F;
  run.stage("write", [&] {
    run.write("hadamard.json", out.dump(2) + "\n");
    run.write("density.csv", density_csv(density));
  });
  std::cout << fmt17(value) << "\n";
  run.finish("shape-grad", config_echo("shape-grad", opt, F, k), s.mesh.get());
  return 0;
}

int cmd_fd_check(const Options& opt) {
  RunWriter run(opt.out_dir);
  const std::vector<int> F = parse_cluster(opt.cluster);
  validate_common(opt, F, true);
  if (opt.fd_levels < 1) throw BadInputError("fd_levels must be >= 1");
  const int k = effective_k(opt, F);
  const Normalization norm = parse_normalization(opt.normalization);
  const PerturbSpec pert = load_perturb(opt.pert_path);
  const ShapeSpec shape = load_shape(opt.shape_path);
  Solved s = solve_shape(run, opt, k);
  const EigenCluster cluster = run.stage("cluster", [&] {
    return detect_cluster(s.result, F, opt.cluster_tol, opt.sep_tol);
  });
  const double had = run.stage("derivative", [&] {
    return hadamard_derivative(cluster, opt.h, pert, norm);
  });

  auto rel_gap = [](double fd, double hv) {
    const double scale = std::max(std::abs(fd), std::abs(hv));
    return scale < 1e-14 ? 0.0 : std::abs(fd - hv) / scale;
  };

  std::string csv = "epsilon,fd,hadamard,rel_gap\n";
  run.stage("fd", [&] {
    for (int i = 0; i < opt.fd_levels; ++i) {
      const double eps = opt.eps0 / double(1 << i);
      const double fd =
          fd_derivative(shape, F, opt.h, pert, eps, s.mesh, opt.sep_tol);
      csv += fmt17(eps) + "," + fmt17(fd) + "," + fmt17(had) + "," +
             fmt17(rel_gap(fd, had)) + "\n";
    }
    const auto rich = oracle::richardson_diff(
        [&](double eps) {
          return symfun_at(perturbed(shape, pert, eps), F, opt.h, s.mesh, opt.sep_tol);
        },
        opt.eps0, opt.fd_levels);
    // final row: Richardson extrapolation, epsilon written as 0
    csv += "0," + fmt17(rich.derivative) + "," + fmt17(had) + "," +
           fmt17(rel_gap(rich.derivative, had)) + "\n";
  });
  run.stage("write", [&] { run.write("fd_check.csv", csv); });
  run.finish("fd-check", config_echo("fd-check", opt, F, k), s.mesh.get());
  return 0;
}

int cmd_criticality(const Options& opt) {
  RunWriter run(opt.out_dir);
  const std::vector<int> F = parse_cluster(opt.cluster);
  validate_common(opt, F, true);
  const int k = effective_k(opt, F);
  const Constraint constraint = parse_constraint(opt.constraint);
  Solved s = solve_shape(run, opt, k);
  const EigenCluster cluster = run.stage("cluster", [&] {
    return detect_cluster(s.result, F, opt.cluster_tol, opt.sep_tol);
  });
  const CriticalityReport report = run.stage("fit", [&] {
    return criticality_report(cluster, constraint);
  });
  run.stage("write", [&] {
    run.write("criticality.json", report_to_json(report, F) + "\n");
  });
  run.finish("criticality", config_echo("criticality", opt, F, k), s.mesh.get());
  return 0;
}

int cmd_flow(const Options& opt) {
  RunWriter run(opt.out_dir);
  const std::vector<int> F = parse_cluster(opt.cluster);
  validate_common(opt, F, true);
  if (opt.steps < 0) throw BadInputError("steps must be >= 0");
  if (!(opt.step_size > 0.0)) throw BadInputError("step_size must be positive");
  FlowParams params;
  params.F = F;
  params.h = opt.h;
  params.constraint = parse_constraint(opt.constraint);
  params.steps = opt.steps;
  params.step_size = opt.step_size;
  params.level = opt.level;
  params.max_mode = opt.max_mode;
  params.cluster_tol = opt.cluster_tol;
  params.sep_tol = opt.sep_tol;
  const ShapeSpec shape = load_shape(opt.shape_path);
  const DiskMesh mesh_stats = build_disk_mesh(opt.level);
  const auto trajectory = run.stage("flow", [&] { return constrained_flow(shape, params); });
  std::string csv = "step,Lambda,residual,volume,perimeter,mode_energy\n";
  for (const FlowState& st : trajectory) {
    csv += std::to_string(st.step) + "," + fmt17(st.Lambda) + "," + fmt17(st.residual) +
           "," + fmt17(st.volume) + "," + fmt17(st.perimeter) + "," +
           fmt17(st.mode_energy) + "\n";
  }
  run.stage("write", [&] {
    run.write("flow.csv", csv);
    run.write("final_shape.json", shape_to_json(trajectory.back().shape) + "\n");
  });
  run.finish("flow", config_echo("flow", opt, F, F.back() + 2), &mesh_stats);
  return 0;
}

int cmd_disk_oracle(const Options& opt, double radius, int nmax) {
  RunWriter run(opt.out_dir);
  if (!(radius > 0.0)) throw BadInputError("radius must be positive");
  if (nmax < 0) throw BadInputError("n-max must be >= 0");
  std::string csv = "n,R,I,Iprime,lambda\n";
  run.stage("oracle", [&] {
    for (int n = 0; n <= nmax; ++n) {
      csv += std::to_string(n) + "," + fmt17(radius) + "," +
             fmt17(oracle::bessel_i(n, radius)) + "," +
             fmt17(oracle::bessel_i_prime(n, radius)) + "," +
             fmt17(oracle::disk_eigenvalue(n, radius)) + "\n";
    }
  });
  run.stage("write", [&] { run.write("disk_oracle.csv", csv); });
  json cfg;
  cfg["command"] = "disk-oracle";
  cfg["radius"] = radius;
  cfg["n_max"] = nmax;
  cfg["out"] = opt.out_dir;
  run.finish("disk-oracle", cfg, nullptr);
  return 0;
}

void emit_error(const std::string& code, const std::string& message) {
  json err;
  err["error"] = code;
  err["message"] = message;
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steklov-type eigenvalue laboratory on deformed disks"};
  app.require_subcommand(1);
  // --h is a real option on several subcommands, so help is --help only
  app.set_help_flag("--help", "print help and exit");
  app.set_version_flag("--version", kVersion);

  Options opt;
  double oracle_radius = 1.0;
  int oracle_nmax = 8;

  auto add_common = [&](CLI::App* cmd, bool shape, bool pert, bool with_k = true) {
    cmd->set_help_flag("--help", "print help and exit");
    if (shape)
      cmd->add_option("--shape", opt.shape_path, "shape JSON file")
          ->required()
          ->check(CLI::ExistingFile);
    if (pert)
      cmd->add_option("--pert", opt.pert_path, "perturbation JSON file")
          ->required()
          ->check(CLI::ExistingFile);
    cmd->add_option("--level", opt.level, "mesh refinement level in [2,7]");
    if (with_k)
      cmd->add_option("--k", opt.k, "eigenvalue count (default: max(6, max(F)+2))");
    cmd->add_option("--seed", opt.seed, "seed echoed into the manifest");
    cmd->add_option("--out", opt.out_dir, "output directory")->required();
  };
  auto add_cluster = [&](CLI::App* cmd) {
    cmd->add_option("--cluster", opt.cluster, "contiguous 1-based index set, e.g. 2,3");
    cmd->add_option("--cluster-tol", opt.cluster_tol, "relative multiplet width tolerance");
    cmd->add_option("--sep-tol", opt.sep_tol, "relative separation tolerance");
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue table");
  add_common(spectrum, true, false);
  spectrum->add_flag("--dump-mesh", opt.dump_mesh, "also write the mesh as ASCII");

  auto* symfun = app.add_subcommand("symfun", "elementary symmetric functions of a cluster");
  add_common(symfun, true, false);
  add_cluster(symfun);

  auto* grad = app.add_subcommand("shape-grad", "derivative of Lambda_{F,h} plus density");
  add_common(grad, true, true);
  add_cluster(grad);
  grad->add_option("--h", opt.h, "symmetric function order");
  grad->add_option("--normalization", opt.normalization, "sobolev | boundary");

  auto* fdc = app.add_subcommand("fd-check", "finite-difference validation table");
  add_common(fdc, true, true);
  add_cluster(fdc);
  fdc->add_option("--h", opt.h, "symmetric function order");
  fdc->add_option("--normalization", opt.normalization, "sobolev | boundary");
  fdc->add_option("--eps0", opt.eps0, "largest finite-difference step");
  fdc->add_option("--fd-levels", opt.fd_levels, "number of halvings");

  auto* crit = app.add_subcommand("criticality", "overdetermined-condition residual");
  add_common(crit, true, false);
  add_cluster(crit);
  crit->add_option("--constraint", opt.constraint, "volume | perimeter");

  auto* flow = app.add_subcommand("flow", "constrained gradient ascent on Lambda_{F,h}");
  add_common(flow, true, false, /*with_k=*/false);  // flow sizes k from F itself
  add_cluster(flow);
  flow->add_option("--h", opt.h, "symmetric function order");
  flow->add_option("--constraint", opt.constraint, "volume | perimeter");
  flow->add_option("--steps", opt.steps, "number of steps");
  flow->add_option("--step-size", opt.step_size, "gradient step size");
  flow->add_option("--max-mode", opt.max_mode, "Fourier bandwidth (0: auto)");

  auto* oracle_cmd = app.add_subcommand("disk-oracle", "Bessel reference table");
  oracle_cmd->set_help_flag("--help", "print help and exit");
  oracle_cmd->add_option("--radius", oracle_radius, "disk radius");
  oracle_cmd->add_option("--n-max", oracle_nmax, "largest angular order");
  oracle_cmd->add_option("--seed", opt.seed, "seed echoed into the manifest");
  oracle_cmd->add_option("--out", opt.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit_error("BadInput", e.what());
    return 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(opt);
    if (*symfun) return cmd_symfun(opt);
    if (*grad) return cmd_shape_grad(opt);
    if (*fdc) return cmd_fd_check(opt);
    if (*crit) return cmd_criticality(opt);
    if (*flow) return cmd_flow(opt);
    if (*oracle_cmd) return cmd_disk_oracle(opt, oracle_radius, oracle_nmax);
  } catch (const ValidationError& e) {
    emit_error(e.code(), e.what());
    return 2;
  } catch (const NumericalError& e) {
    emit_error(e.code(), e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("Internal", e.what());
    return 3;
  }
  return 0;
}
