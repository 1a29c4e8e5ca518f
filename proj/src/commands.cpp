#include "toda/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "toda/folding.hpp"
#include "toda/serialization.hpp"
#include "toda/solver.hpp"

namespace toda::commands {

namespace {

std::size_t idx(int a) { return static_cast<std::size_t>(a); }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Result failure(const Error& e) { return {exit_status(e.code()), std::string(to_string(e.code())) + ": " + e.what() + "\n"}; }

// A document that names a spec either directly or under "spec".
GradationSpec spec_of(const json& j) { return spec_from_json(j.contains("spec") ? j["spec"] : j); }

ComplexMatrix random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
  return m;
}

struct Line {
  std::string name;
  bool pass;
  std::string value;
};

std::vector<Line> spec_invariants(const GradationSpec& spec, double tol) {
  std::vector<Line> out;
  std::mt19937_64 rng(0x70da);
  const Automorphism aut = build_automorphism(spec);
  const AlgebraFamily fam = spec_algebra(spec);
  const int n = spec.n;
  const int M = spec.M;
  auto rand_alg = [&] { return fam.project(random_matrix(rng, n)); };
  auto record = [&](const std::string& name, double v) { out.push_back({name, v <= tol, sci(v)}); };

  double order = 0.0, complete = 0.0, closure = 0.0, member = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexMatrix x = rand_alg();
    const ComplexMatrix y = rand_alg();
    ComplexMatrix ax = x;
    for (int k = 0; k < M; ++k) ax = apply_automorphism(aut, ax);
    order = std::max(order, max_abs(ax - x));
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    std::vector<ComplexMatrix> px, py;
    for (int k = 0; k < M; ++k) {
      px.push_back(grading_component(x, k, aut));
      py.push_back(grading_component(y, k, aut));
      sum += px.back();
    }
    complete = std::max(complete, max_abs(sum - x));
    for (int k = 0; k < M; ++k)
      for (int l = 0; l < M; ++l) {
        const ComplexMatrix b = commutator(px[idx(k)], py[idx(l)]);
        closure = std::max(closure, max_abs(b - grading_component(b, (k + l) % M, aut)));
      }
    if (fam.has_structure() || fam.kind() == FamilyKind::sl) {
      const ComplexMatrix img = apply_automorphism(aut, x);
      member = std::max(member, max_abs(img - fam.project(img)));
    }
  }
  record("automorphism_order", order);
  record("projector_completeness", complete);
  record("bracket_closure", closure);
  if (fam.kind() != FamilyKind::gl) record("membership_preserved", member);

  // Table against the projector: each block's grades are exactly those listed.
  const GradingIndexTable table = block_index_table(spec);
  int mismatches = 0;
  for (int a = 0; a < spec.p(); ++a) {
    for (int b = 0; b < spec.p(); ++b) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e.block(spec.block_offset(a), spec.block_offset(b), spec.n_list[idx(a)], spec.n_list[idx(b)]) =
          random_matrix(rng, std::max(spec.n_list[idx(a)], spec.n_list[idx(b)]))
              .topLeftCorner(spec.n_list[idx(a)], spec.n_list[idx(b)]);
      const ComplexMatrix x = fam.project(e);
      for (int k = 0; k < M; ++k) {
        const ComplexMatrix pk = grading_component(x, k, aut);
        const double blk = pk.block(spec.block_offset(a), spec.block_offset(b), spec.n_list[idx(a)],
                                    spec.n_list[idx(b)]).cwiseAbs().maxCoeff();
        if ((blk > 1e-9) && !table.carries(a, b, k)) ++mismatches;
      }
    }
  }
  out.push_back({"table_vs_projector", mismatches == 0, std::to_string(mismatches) + " mismatches"});

  TodaSystem sys;
  try {
    sys = build_system(spec, 1);
  } catch (const Error& e) {
    out.push_back({"system_build", false, e.what()});
    return out;
  }
  const ChainState st = random_constrained_state(sys, 7, 0.3);
  record("block_vs_full", rhs_blocks_vs_full(sys, st.gammas));

  if (sys.fold) {
    TodaSystem chain;
    chain.origin = SystemOrigin::Chain;
    chain.family = FamilyKind::gl;
    chain.n_list = sys.n_list;
    chain.c_plus = sys.c_plus;
    chain.c_minus = sys.c_minus;
    chain.constraints.gamma.assign(sys.n_list.size(), std::nullopt);
    chain.constraints.c_rule.assign(sys.n_list.size(), std::nullopt);
    const double coarse = verify_fold_invariance(*sys.fold, chain, st, 20, 0.02);
    if (coarse < 1e-12) {
      out.push_back({"fold_invariance_order", true, "exact (" + sci(coarse) + ")"});
    } else {
      const double ord = fold_invariance_order(*sys.fold, chain, st, 20, 0.02);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", ord);
      out.push_back({"fold_invariance_order", ord >= 1.9, buf});
    }
  }
  return out;
}

// Simulation --------------------------------------------------------------

struct Run {
  TodaSystem system;
  GoursatData data;
  Grid grid;
  RealForm form = RealForm::None;
  std::string preset;
  std::function<void(const FieldHistory&, std::map<std::string, double>&)> extra;
};

constexpr double kKinkSlope = 1.4142135623730951;

Blocks mats(std::initializer_list<std::initializer_list<double>> rows4) {
  Blocks out;
  for (const auto& r : rows4) {
    std::vector<double> v(r);
    ComplexMatrix m(2, 2);
    m << v[0], v[1], v[2], v[3];
    out.push_back(m);
  }
  return out;
}

Run preset_run(const std::string& name, const std::optional<Grid>& grid_override) {
  Run run;
  run.preset = name;
  if (name == "sine-gordon-kink") {
    run.system = scalar_reduction_system();
    run.grid = grid_override.value_or(Grid::square(-5.0, 5.0, 512));
    run.data = kink_data(run.grid, kKinkSlope);
    run.form = RealForm::Compact;
    run.extra = [](const FieldHistory& h, std::map<std::string, double>& s) {
      const ScalarField f = sine_gordon_reduce(h);
      s["kink_linf_error"] = max_error(f, h.grid, [](double zm, double zp) { return analytic_kink(zm, zp, kKinkSlope); });
    };
  } else if (name == "sinh-gordon") {
    constexpr double eps = 1e-3;
    run.system = scalar_reduction_system();
    run.grid = grid_override.value_or(Grid{0.0, 1.0, 0.0, 1.0, 0.01, 0.01});
    run.data = sinh_gordon_data(run.grid, eps, kKinkSlope);
    run.form = RealForm::RealSplit;
    run.extra = [eps](const FieldHistory& h, std::map<std::string, double>& s) {
      const ScalarField f = sinh_gordon_reduce(h);
      auto lin = [eps](double zm, double zp) { return eps * std::exp(kKinkSlope * zm + (2.0 / kKinkSlope) * zp); };
      double scale = 0.0;
      for (int j = 0; j < f.points_plus; ++j)
        for (int i = 0; i < f.points_minus; ++i) scale = std::max(scale, std::abs(lin(h.grid.z_minus(i), h.grid.z_plus(j))));
      s["linearized_relative_error"] = max_error(f, h.grid, lin) / scale;
    };
  } else if (name == "periodic-chain") {
    run.system = build_periodic_chain(3, 2, 1.0, 1.0, FamilyKind::sl);
    run.grid = grid_override.value_or(Grid{0.0, 1.0, 0.0, 1.0, 0.01, 0.01});
    const Blocks id(3, ComplexMatrix::Identity(2, 2));
    // Generator traces sum to zero, so the edges keep prod det = 1.
    const Blocks x = mats({{0.1, 0.2, 0.0, -0.1}, {0.0, 0.1, 0.3, 0.2}, {-0.2, 0.0, 0.1, 0.0}});
    const Blocks y = mats({{0.0, -0.1, 0.2, 0.1}, {0.2, 0.0, 0.0, -0.3}, {0.1, 0.1, -0.1, -0.1}});
    run.data = generator_data(run.grid, id, x, y);
    run.form = RealForm::RealSplit;
  } else if (name == "free-field") {
    run.system = build_periodic_chain(2, 2, 0.0, 1.0);
    run.grid = grid_override.value_or(Grid{0.0, 1.0, 0.0, 1.0, 0.01, 0.01});
    const Blocks g0 = mats({{1.0, 0.2, 0.1, 1.0}, {0.9, -0.1, 0.3, 1.1}});
    const Blocks x = mats({{0.3, 0.5, -0.2, 0.1}, {0.0, 0.4, 0.2, -0.3}});
    const Blocks y = mats({{-0.1, 0.2, 0.6, 0.2}, {0.5, 0.0, -0.1, 0.2}});
    run.data = generator_data(run.grid, g0, x, y);
    run.extra = [g0, x, y](const FieldHistory& h, std::map<std::string, double>& s) {
      double worst = 0.0;
      for (int j = 0; j < h.points_plus; ++j)
        for (int i = 0; i < h.points_minus; ++i)
          for (int a = 0; a < 2; ++a) {
            const ComplexMatrix exact = matrix_exp((h.grid.z_plus(j) - h.grid.zp_min) * y[idx(a)]) * g0[idx(a)] *
                                        matrix_exp((h.grid.z_minus(i) - h.grid.zm_min) * x[idx(a)]);
            worst = std::max(worst, max_abs(h.at(i, j, a) - exact));
          }
      s["factorization_error"] = worst;
    };
  } else {
    throw Error(ErrorCode::Parse, std::string("unknown preset '") + name + "' (known: " + preset_names() + ")");
  }
  return run;
}

std::optional<Grid> grid_of(const json& req) {
  if (!req.contains("grid") || req["grid"].is_null()) return std::nullopt;
  const json& g = req["grid"];
  return g.is_string() ? parse_grid(g.get<std::string>()) : grid_from_json(g);
}

}  // namespace

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return 2;
    case ErrorCode::ResourceLimit: return 3;
    case ErrorCode::BlowUp: return 4;
    default: return 1;
  }
}

const char* preset_names() { return "sine-gordon-kink, sinh-gordon, periodic-chain, free-field"; }

Result validate(const std::string& text) {
  try {
    const GradationSpec spec = spec_of(parse_json(text));
    const auto violations = validate_spec(spec);
    if (violations.empty()) return {0, "valid\n"};
    std::string report;
    for (const auto& v : violations) report += v.constraint + ": " + v.message + "\n";
    return {1, report};
  } catch (const Error& e) {
    return failure(e);
  }
}

Result enumerate(const std::string& family, int n, int M, std::size_t max_count, Format format) {
  try {
    FamilyKind fam;
    try {
      fam = family_from_string(family);
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, e.what());
    }
    const auto specs = enumerate_specs(fam, n, M, max_count);
    auto class_of = [](const GradationSpec& s) -> std::string {
      try {
        return to_string(build_system(s, 1).equation_class);
      } catch (const Error&) {
        return "none";
      }
    };
    std::ostringstream os;
    if (format == Format::Json) {
      json arr = json::array();
      for (const auto& s : specs) {
        const GradingIndexTable t = block_index_table(s);
        json rows = json::array();
        for (int a = 0; a < t.p; ++a) {
          json row = json::array();
          for (int b = 0; b < t.p; ++b) {
            if (t.outer) row.push_back({t.at_signed(a, b, -1), t.at_signed(a, b, 1)});
            else row.push_back(t.at(a, b));
          }
          rows.push_back(row);
        }
        arr.push_back({{"spec", to_json(s)}, {"table", rows}, {"outer", t.outer}, {"class", class_of(s)}});
      }
      os << arr.dump(2) << "\n";
    } else if (format == Format::Latex) {
      for (std::size_t i = 0; i < specs.size(); ++i) os << (i ? "\n" : "") << table_to_latex(specs[i]);
    } else {
      for (const auto& s : specs) {
        const GradingIndexTable t = block_index_table(s);
        os << to_string(s.type) << " p=" << s.p() << " n=(";
        for (std::size_t i = 0; i < s.n_list.size(); ++i) os << (i ? "," : "") << s.n_list[i];
        os << ") k=(";
        for (std::size_t i = 0; i < s.k_list.size(); ++i) os << (i ? "," : "") << s.k_list[i];
        os << ")" << (s.phase_offset != 0.0 ? " phase=1/2" : "") << " class=" << class_of(s) << "\n";
        for (int a = 0; a < t.p; ++a) {
          os << "   ";
          for (int b = 0; b < t.p; ++b) {
            if (t.outer) os << " " << t.at_signed(a, b, -1) << "/" << t.at_signed(a, b, 1);
            else os << " " << t.at(a, b);
          }
          os << "\n";
        }
      }
      os << specs.size() << " specs\n";
    }
    return {0, os.str()};
  } catch (const Error& e) {
    return failure(e);
  }
}

Result describe(const std::string& text, Format format) {
  try {
    const json doc = parse_json(text);
    TodaSystem sys;
    const bool bare_spec = doc.is_object() && doc.contains("type") && doc.contains("n_list") && !doc.contains("origin");
    if (bare_spec) sys = build_system(spec_from_json(doc), 1);
    else sys = system_from_json(doc);
    if (format == Format::Latex) return {0, system_to_latex(sys)};
    return {0, to_json(sys).dump(2) + "\n"};
  } catch (const Error& e) {
    return failure(e);
  }
}

Result check(const std::string& text, double tol) {
  try {
    const GradationSpec spec = spec_of(parse_json(text));
    const auto violations = validate_spec(spec);
    if (!violations.empty()) {
      std::string report;
      for (const auto& v : violations) report += "FAIL validation " + v.constraint + ": " + v.message + "\n";
      return {1, report};
    }
    std::string report = "PASS validation\n";
    bool ok = true;
    for (const auto& line : spec_invariants(spec, tol)) {
      report += (line.pass ? "PASS " : "FAIL ") + line.name + " " + line.value + "\n";
      ok = ok && line.pass;
    }
    return {ok ? 0 : 1, report};
  } catch (const Error& e) {
    return failure(e);
  }
}

Result simulate(const std::string& text) {
  RunManifest manifest;
  manifest.command = "simulate";
  try {
    const json req = parse_json(text);
    if (!req.is_object()) throw Error(ErrorCode::Parse, "a simulation request is a JSON object");
    const std::optional<Grid> grid = grid_of(req);
    Run run;
    if (req.contains("preset") && !req["preset"].is_null()) {
      run = preset_run(req["preset"].get<std::string>(), grid);
      manifest.spec_reference = "preset:" + run.preset;
    } else {
      if (!req.contains("system")) throw Error(ErrorCode::Parse, "request needs a preset or a system");
      if (!grid) throw Error(ErrorCode::Parse, "a system run needs a grid");
      run.system = system_from_json(req["system"]);
      run.grid = *grid;
      if (!req.contains("initial")) throw Error(ErrorCode::Parse, "a system run needs initial data");
      run.data = initial_from_json(req["initial"], run.system, run.grid);
      if (req.contains("real_form")) run.form = real_form_from_string(req["real_form"].get<std::string>());
    }
    if (req.contains("spec_reference") && req["spec_reference"].is_string())
      manifest.spec_reference = req["spec_reference"].get<std::string>();
    manifest.spec = run.system.spec ? to_json(*run.system.spec) : json(nullptr);
    manifest.grid = run.grid;
    if (req.contains("config") && !req["config"].is_null()) manifest.config = config_from_json(req["config"]);

    const FieldHistory hist = integrate(run.system, run.data, run.grid, manifest.config);
    auto& s = manifest.summary;
    s["rows_completed"] = hist.points_plus;
    if (hist.points_plus > 0) {
      s["residual"] = residual(hist, run.system, run.data);
      s["constraint_drift"] = constraint_drift(hist, run.system);
      if (run.form != RealForm::None) s["reality_drift"] = reality_preservation(hist, run.form);
      if (run.system.constraints.det_product_one) s["det_product_drift"] = det_product_drift(hist, run.system);
      if (run.extra && hist.complete()) run.extra(hist, s);
    }
    manifest.exit_status = hist.complete() ? 0 : exit_status(ErrorCode::BlowUp);
    manifest.message = hist.complete() ? "ok" : hist.message;

    if (req.contains("output") && req["output"].is_string()) {
      const std::filesystem::path dir = req["output"].get<std::string>();
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create " + dir.string() + ": " + ec.message());
      const auto csv = dir / "field.csv";
      const auto man = dir / "manifest.json";
      manifest.outputs = {csv.string(), man.string()};
      std::ofstream f(csv);
      if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + csv.string());
      write_field_csv(f, hist, manifest.config.checkpoint_stride);
      std::ofstream m(man);
      if (!m) throw Error(ErrorCode::InvalidArgument, "cannot write " + man.string());
      m << to_json(manifest).dump(2) << "\n";
    }
    return {manifest.exit_status, to_json(manifest).dump(2) + "\n"};
  } catch (const Error& e) {
    return failure(e);
  }
}

}  // namespace toda::commands
