#include "nsdyn/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nsdyn/cli/checks.hpp"
#include "nsdyn/cli/registry.hpp"

namespace nsdyn::cli {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

const std::vector<std::string>& system_verbs() {
  static const std::vector<std::string> verbs{
      "classify", "slide",     "regularize", "blowup",   "integrate", "equilibria",
      "sweep-delta", "sweep-eps", "csliding", "check"};
  return verbs;
}

namespace {

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ += (i ? "," : "") + cells[i];
    out_ += "\n";
  }
  const std::string& str() const { return out_; }

 private:
  std::size_t width_;
  std::string out_;
};

std::vector<std::string> names_with(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void append(std::vector<std::string>& row, std::span<const double> v) {
  for (double x : v) row.push_back(num(x));
}

void append_blank(std::vector<std::string>& row, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) row.emplace_back();
}

std::string pick(const std::string& flag, const SystemConfig& cfg, const std::string& key,
                 const std::string& fallback) {
  return flag.empty() ? cfg.get(key, fallback) : flag;
}

Vec vector_arg(const std::string& text, std::size_t dim, const char* what) {
  const std::vector<double> v = parse_list(text);
  if (v.size() != dim)
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " needs " +
                                                std::to_string(dim) + " components, got " +
                                                std::to_string(v.size()));
  return v;
}

std::size_t sample_count(const CommandOptions& opt, const SystemConfig& cfg,
                         std::size_t fallback) {
  if (opt.n > 0) return opt.n;
  const std::string s = cfg.get("n");
  if (s.empty()) return fallback;
  const auto v = parse_list(s);
  if (v.size() != 1 || v[0] < 2 || v[0] != std::floor(v[0]))
    throw Error(ErrorKind::InvalidArgument, "n must be an integer >= 2");
  return static_cast<std::size_t>(v[0]);
}

SigmaSegment make_segment(const SystemConfig& cfg, const CommandOptions& opt,
                          const PiecewiseSystem& sys) {
  const RangeSpec r = parse_range(pick(opt.range, cfg, "range", "x2=-1:2"), sys.dim);
  const std::string at = pick(opt.at, cfg, "at", "");
  Vec base = at.empty() ? Vec(sys.dim, 0.0) : vector_arg(at, sys.dim, "--at");
  if (sys.switching_coord) {
    if (*sys.switching_coord == r.coord)
      throw Error(ErrorKind::InvalidArgument,
                  "range variable is the switching coordinate; choose a coordinate along Sigma");
    base[*sys.switching_coord] = 0.0;
  }
  SigmaSegment seg{base, base};
  seg.start[r.coord] = r.lo;
  seg.end[r.coord] = r.hi;
  return seg;
}

SmoothFamily make_family(const SystemConfig& cfg, const CommandOptions& opt,
                         const PiecewiseSystem& sys, const Transition& tr) {
  std::string fam = opt.family;
  if (fam.empty()) fam = tr.monotone() ? "st" : "r";
  if (fam == "st") return st_regularize(sys, tr);
  if (fam == "r") return r_regularize(sys, tr);
  if (fam == "nonlinear") return nonlinear_regularize(build_combination(cfg), tr);
  throw Error(ErrorKind::InvalidArgument, "family must be st, r or nonlinear");
}

double first_delta(const SystemConfig& cfg, const CommandOptions& opt) {
  const auto d = parse_list(pick(opt.delta, cfg, "delta", "0.01"));
  if (d.empty() || !(d[0] > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be > 0");
  return d[0];
}

Outputs cmd_classify(const SystemConfig& cfg, const CommandOptions& opt) {
  const PiecewiseSystem sys = build_piecewise(cfg);
  const SigmaScan scan = scan_sigma(sys, make_segment(cfg, opt, sys), sample_count(opt, cfg, 300));
  auto header = std::vector<std::string>{"u"};
  for (const auto& s : state_names(sys.dim)) header.push_back(s);
  header.insert(header.end(), {"class", "lplus", "lminus"});
  Csv samples(header);
  for (const SigmaSample& s : scan.samples) {
    std::vector<std::string> row{num(s.u)};
    append(row, s.point);
    row.insert(row.end(), {to_string(s.cls.kind), num(s.cls.lplus), num(s.cls.lminus)});
    samples.row(row);
  }
  std::vector<std::string> ih{"class"};
  for (const auto& s : names_with("start_x", sys.dim)) ih.push_back(s);
  for (const auto& s : names_with("end_x", sys.dim)) ih.push_back(s);
  ih.insert(ih.end(), {"start_tangency", "end_tangency"});
  Csv intervals(ih);
  Outputs out;
  for (const SigmaInterval& iv : scan.intervals) {
    std::vector<std::string> row{to_string(iv.kind)};
    append(row, iv.start);
    append(row, iv.end);
    row.push_back(iv.start_is_tangency ? "1" : "0");
    row.push_back(iv.end_is_tangency ? "1" : "0");
    intervals.row(row);
    std::ostringstream line;
    line << to_string(iv.kind) << " from " << num(iv.start[0]);
    for (std::size_t i = 1; i < iv.start.size(); ++i) line << " " << num(iv.start[i]);
    line << " to " << num(iv.end[0]);
    for (std::size_t i = 1; i < iv.end.size(); ++i) line << " " << num(iv.end[i]);
    out.text += line.str() + "\n";
  }
  out.files = {{"classify.csv", samples.str()}, {"intervals.csv", intervals.str()}};
  return out;
}

Outputs cmd_slide(const SystemConfig& cfg, const CommandOptions& opt) {
  const PiecewiseSystem sys = build_piecewise(cfg);
  const SigmaScan scan = scan_sigma(sys, make_segment(cfg, opt, sys), sample_count(opt, cfg, 300));
  std::vector<std::string> header = state_names(sys.dim);
  header.insert(header.end(), {"class", "s"});
  for (const auto& s : names_with("xs", sys.dim)) header.push_back(s);
  Csv csv(header);
  std::size_t sliding = 0;
  for (const SigmaSample& s : scan.samples) {
    std::vector<std::string> row;
    append(row, s.point);
    row.push_back(to_string(s.cls.kind));
    if (is_sliding(s.cls.kind)) {
      double coef = 0.0;
      const Vec v = filippov_combination(sys, s.point, &coef);
      row.push_back(num(coef));
      append(row, v);
      ++sliding;
    } else {
      append_blank(row, sys.dim + 1);
    }
    csv.row(row);
  }
  Outputs out;
  out.files = {{"slide.csv", csv.str()}};
  out.text = std::to_string(sliding) + " of " + std::to_string(scan.samples.size()) +
             " samples are sliding\n";
  return out;
}

Outputs cmd_regularize(const SystemConfig& cfg, const CommandOptions& opt) {
  const PiecewiseSystem sys = build_piecewise(cfg);
  const Transition tr = build_transition(cfg);
  const SmoothFamily fam = make_family(cfg, opt, sys, tr);
  const double delta = first_delta(cfg, opt);
  const SigmaSegment seg = make_segment(cfg, opt, sys);
  const std::size_t n = sample_count(opt, cfg, 101);
  std::vector<std::string> header = state_names(sys.dim);
  header.insert(header.end(), {"h", "family", "delta"});
  for (const auto& s : names_with("X", sys.dim)) header.push_back(s);
  Csv csv(header);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec p0 = seg.at(static_cast<double>(i) / static_cast<double>(n - 1));
    const Vec g = sys.grad_h(p0);
    const double gg = dot(g, g);
    for (double off : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
      Vec p = p0;
      for (std::size_t k = 0; k < p.size(); ++k) p[k] += off * delta * g[k] / gg;
      std::vector<std::string> row;
      append(row, p);
      row.insert(row.end(), {num(sys.h(p)), to_string(fam.provenance()), num(delta)});
      append(row, fam(p, delta));
      csv.row(row);
    }
  }
  Outputs out;
  out.files = {{"regularize.csv", csv.str()}};
  out.text = std::string(to_string(fam.provenance())) + " family with transition " +
             tr.name() + ", delta = " + num(delta) + "\n";
  return out;
}

Outputs cmd_blowup(const SystemConfig& cfg, const CommandOptions& opt) {
  const PiecewiseSystem sys = build_piecewise(cfg);
  if (!sys.switching_coord)
    throw Error(ErrorKind::InvalidArgument, "blow-up needs h equal to a coordinate");
  const Transition tr = build_transition(cfg);
  const SmoothFamily fam = make_family(cfg, opt, sys, tr);
  const SlowFastSystem sfs = directional_blowup(fam, *sys.switching_coord);
  const SigmaSegment seg = make_segment(cfg, opt, sys);
  const std::size_t n = sample_count(opt, cfg, 300);
  std::vector<RRegionSample> regions;
  if (fam.provenance() != Provenance::Nonlinear) regions = r_region_scan(sys, tr, seg, n);
  std::vector<std::string> header = state_names(sys.dim);
  header.insert(header.end(), {"region", "ybar", "dbeta", "hyperbolic", "attracting"});
  for (const auto& s : names_with("reduced", sfs.slow_dim)) header.push_back(s);
  Csv csv(header);
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec p = seg.at(static_cast<double>(i) / static_cast<double>(n - 1));
    const auto roots = critical_roots(sfs, sfs.slow_part(p));
    const std::string region = regions.empty() ? "" : to_string(regions[i].region);
    if (!regions.empty()) ++counts[static_cast<int>(regions[i].region)];
    auto base_row = [&] {
      std::vector<std::string> row;
      append(row, p);
      row.push_back(region);
      return row;
    };
    if (roots.empty()) {
      auto row = base_row();
      append_blank(row, 4 + sfs.slow_dim);
      csv.row(row);
    }
    for (const auto& r : roots) {
      auto row = base_row();
      row.insert(row.end(), {num(r.ybar), num(r.dbeta), r.hyperbolic ? "1" : "0",
                             r.attracting ? "1" : "0"});
      if (r.hyperbolic)
        append(row, reduced_rhs(sfs, r));
      else
        append_blank(row, sfs.slow_dim);
      csv.row(row);
    }
  }
  Outputs out;
  out.files = {{"blowup.csv", csv.str()}};
  out.text = "r-sewing " + std::to_string(counts[0]) + ", r-sliding " +
             std::to_string(counts[1]) + ", undetermined " + std::to_string(counts[2]) + "\n";
  return out;
}

Outputs cmd_integrate(const SystemConfig& cfg, const CommandOptions& opt) {
  const PiecewiseSystem sys = build_piecewise(cfg);
  const Vec x0 = vector_arg(pick(opt.x0, cfg, "x0", ""), sys.dim, "--x0");
  double t_end = opt.t_end;
  if (t_end < 0.0) {
    const auto v = parse_list(cfg.get("t_end", "10"));
    t_end = v.at(0);
  }
  OdeOptions ode;
  ode.rtol = opt.rtol;
  ode.atol = opt.atol;
  Trajectory tr;
  const bool regularized = !opt.delta.empty();
  if (regularized) {
    const SmoothFamily fam = make_family(cfg, opt, sys, build_transition(cfg));
    tr = integrate_smooth(fam.field(first_delta(cfg, opt)), x0, 0.0, t_end, ode);
  } else {
    FilippovOptions fo;
    fo.ode = ode;
    tr = integrate_filippov(sys, x0, 0.0, t_end, fo);
  }
  std::vector<std::string> header{"t", "mode"};
  for (const auto& s : state_names(sys.dim)) header.push_back(s);
  header.insert(header.end(), {"h", "s"});
  Csv csv(header);
  for (const Segment& seg : tr.segments)
    for (std::size_t i = 0; i < seg.t.size(); ++i) {
      std::vector<std::string> row{num(seg.t[i]), to_string(seg.mode)};
      append(row, seg.x[i]);
      row.push_back(num(sys.h(seg.x[i])));
      if (seg.mode == Mode::Sliding) {
        double s = 0.0;
        (void)filippov_combination(sys, seg.x[i], &s);
        row.push_back(num(s));
      } else {
        row.emplace_back();
      }
      csv.row(row);
    }
  std::vector<std::string> eh{"t", "kind"};
  for (const auto& s : state_names(sys.dim)) eh.push_back(s);
  Csv events(eh);
  for (const Event& e : tr.events) {
    std::vector<std::string> row{num(e.t), to_string(e.kind)};
    append(row, e.state);
    events.row(row);
  }
  Outputs out;
  out.files = {{"trajectory.csv", csv.str()}, {"events.csv", events.str()}};
  std::ostringstream text;
  text << "modes:";
  for (Mode m : tr.modes()) text << " " << to_string(m);
  text << "\nfinal t = " << num(tr.final_time()) << ", state =";
  for (double v : tr.final_state()) text << " " << num(v);
  text << "\n";
  if (tr.halted) text << "halted: " << tr.halt_reason << "\n";
  out.text = text.str();
  return out;
}

std::vector<std::string> report_header(std::size_t dim) {
  std::vector<std::string> h = state_names(dim);
  for (std::size_t i = 1; i <= dim; ++i) {
    h.push_back("eig" + std::to_string(i) + "_re");
    h.push_back("eig" + std::to_string(i) + "_im");
  }
  h.insert(h.end(), {"n_stable", "n_unstable", "n_center", "residual"});
  return h;
}

void report_cells(std::vector<std::string>& row, const EquilibriumReport& r, std::size_t dim) {
  append(row, r.point);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i < r.eigenvalues.size()) {
      row.push_back(num(r.eigenvalues[i].real()));
      row.push_back(num(r.eigenvalues[i].imag()));
    } else {
      append_blank(row, 2);
    }
  }
  row.insert(row.end(), {std::to_string(r.n_stable), std::to_string(r.n_unstable),
                         std::to_string(r.n_center), num(r.residual)});
}

Outputs cmd_equilibria(const SystemConfig& cfg, const CommandOptions& opt) {
  const PiecewiseSystem sys = build_piecewise(cfg);
  const Vec seed = vector_arg(pick(opt.x0, cfg, "point", ""), sys.dim, "--x0");
  Outputs out;
  EquilibriumReport rep;
  if (!opt.delta.empty()) {
    const double delta = first_delta(cfg, opt);
    const VectorFn f = make_family(cfg, opt, sys, build_transition(cfg)).field(delta);
    rep = equilibrium_report(f, newton_solve(f, seed).x, "delta=" + num(delta));
  } else {
    if (!sys.switching_coord)
      throw Error(ErrorKind::InvalidArgument, "sliding equilibria need h equal to a coordinate");
    const std::size_t k = *sys.switching_coord;
    auto lift = [k, &sys](std::span<const double> u) {
      Vec p;
      for (std::size_t i = 0, j = 0; i < sys.dim; ++i) p.push_back(i == k ? 0.0 : u[j++]);
      return p;
    };
    const VectorFn slide = [&](std::span<const double> u) {
      const Vec v = filippov_combination(sys, lift(u));
      Vec out;
      for (std::size_t i = 0; i < sys.dim; ++i)
        if (i != k) out.push_back(v[i]);
      return out;
    };
    Vec u;
    for (std::size_t i = 0; i < sys.dim; ++i)
      if (i != k) u.push_back(seed[i]);
    const Vec root = newton_solve(slide, u).x;
    EquilibriumReport slow = equilibrium_report(slide, root, "sliding");
    rep = slow;
    rep.point = lift(root);
    const SigmaClass cls = classify_point(sys, rep.point);
    out.text += std::string("class at root: ") + to_string(cls.kind) + "\n";
  }
  const std::size_t dim_eigs = rep.eigenvalues.size();
  std::vector<std::string> header{"context"};
  for (const auto& h : state_names(sys.dim)) header.push_back(h);
  for (std::size_t i = 1; i <= dim_eigs; ++i) {
    header.push_back("eig" + std::to_string(i) + "_re");
    header.push_back("eig" + std::to_string(i) + "_im");
  }
  header.insert(header.end(), {"n_stable", "n_unstable", "n_center", "residual"});
  Csv csv(header);
  std::vector<std::string> row{rep.context};
  report_cells(row, rep, dim_eigs);
  csv.row(row);
  out.files.push_back({"equilibria.csv", csv.str()});
  std::ostringstream text;
  text << rep.context << ": point";
  for (double v : rep.point) text << " " << num(v);
  text << "; stable " << rep.n_stable << ", unstable " << rep.n_unstable << ", center "
       << rep.n_center << "\n";
  out.text += text.str();

  const std::string orbit = pick(opt.orbit_seed, cfg, "orbit_seed", "");
  if (!orbit.empty()) {
    const Vec oseed = vector_arg(orbit, sys.dim, "--orbit-seed");
    const double delta = parse_list(cfg.get("orbit_delta", opt.delta.empty() ? "0.001" : opt.delta)).at(0);
    const SmoothFamily fam = make_family(cfg, opt, sys, build_transition(cfg));
    const RangeSpec sec = parse_range(cfg.get("section", "x2") + "=0:1", sys.dim);
    PeriodicOptions po;
    // The switching plane is invariant for odd transitions and attracts in
    // forward time, so the cycle is computed inside it in reverse time.
    po.reverse_time = true;
    if (sys.switching_coord) po.fixed_coords = {*sys.switching_coord};
    const PeriodicOrbitReport rep2 =
        find_periodic_orbit(fam.field(delta), Section{sec.coord, 0.0, 1}, oseed, po);
    std::vector<std::string> oh = state_names(sys.dim);
    oh.insert(oh.end(), {"radius", "period", "multiplier", "residual"});
    Csv oc(oh);
    std::vector<std::string> orow;
    append(orow, rep2.point);
    double r2 = 0.0;
    for (std::size_t i = 0; i < sys.dim; ++i)
      if (!sys.switching_coord || i != *sys.switching_coord) r2 += rep2.point[i] * rep2.point[i];
    orow.insert(orow.end(), {num(std::sqrt(r2)), num(rep2.period), num(rep2.multiplier),
                             num(rep2.residual)});
    oc.row(orow);
    out.files.push_back({"orbit.csv", oc.str()});
    out.text += "periodic orbit at delta = " + num(delta) + ": radius " + num(std::sqrt(r2)) +
                ", period " + num(rep2.period) + "\n";
  }
  return out;
}

Outputs cmd_sweep_delta(const SystemConfig& cfg, const CommandOptions& opt) {
  const PiecewiseSystem sys = build_piecewise(cfg);
  const Vec p = vector_arg(pick(opt.point, cfg, "point", ""), sys.dim, "--point");
  const auto deltas = parse_list(pick(opt.delta, cfg, "delta", "0.1,0.01,0.001"));
  const Transition tr = build_transition(cfg);
  if (!tr.monotone())
    throw Error(ErrorKind::InvalidArgument, "delta sweep uses the ST family; choose a monotone phi");
  const auto rows = persistence_sweep_delta(sys, tr, p, deltas);
  std::vector<std::string> header{"delta"};
  for (const auto& h : report_header(sys.dim)) header.push_back(h);
  header.insert(header.end(), {"distance", "error"});
  Csv csv(header);
  Outputs out;
  for (const auto& r : rows) {
    std::vector<std::string> row{num(r.delta)};
    if (r.ok) {
      report_cells(row, r.report, sys.dim);
      row.push_back(num(r.distance));
      row.emplace_back();
      ++out.pass;
    } else {
      append_blank(row, 3 * sys.dim + 5);
      row.push_back("\"" + r.error + "\"");
      ++out.fail;
    }
    csv.row(row);
    out.text += "delta " + num(r.delta) +
                (r.ok ? ": stable " + std::to_string(r.report.n_stable) + ", unstable " +
                            std::to_string(r.report.n_unstable) + ", |Q - p| = " + num(r.distance)
                      : ": " + r.error) +
                "\n";
  }
  out.files = {{"sweep-delta.csv", csv.str()}};
  return out;
}

Outputs cmd_sweep_eps(const SystemConfig& cfg, const CommandOptions& opt) {
  if (cfg.kind == "piecewise")
    throw Error(ErrorKind::InvalidArgument, "sweep-eps needs an nsff or ccomb system");
  const auto eps = parse_list(pick(opt.eps, cfg, "eps", "0.1,0.05,0.01"));
  const Vec x0 = vector_arg(pick(opt.point, cfg, "point", ""), cfg.dim, "--point");
  const double y0 = parse_list(pick(opt.y0, cfg, "y0", "0")).at(0);
  Outputs out;
  if (cfg.kind == "nsff") {
    const auto rows = persistence_sweep_eps(build_nsff(cfg), x0, y0, eps);
    std::vector<std::string> header{"eps"};
    for (const auto& h : state_names(cfg.dim)) header.push_back(h);
    header.insert(header.end(), {"y", "distance", "residual", "n_stable", "n_unstable", "error"});
    Csv csv(header);
    for (const auto& r : rows) {
      std::vector<std::string> row{num(r.eps)};
      if (r.ok) {
        append(row, r.x);
        row.insert(row.end(), {num(r.y), num(r.distance), num(r.residual),
                               std::to_string(r.report.n_stable),
                               std::to_string(r.report.n_unstable), ""});
        ++out.pass;
      } else {
        append_blank(row, cfg.dim + 5);
        row.push_back("\"" + r.error + "\"");
        ++out.fail;
      }
      csv.row(row);
      out.text += "eps " + num(r.eps) +
                  (r.ok ? ": x2 = " + num(r.x[1]) + ", |p - p0| = " + num(r.distance) : ": " + r.error) +
                  "\n";
    }
    out.files = {{"sweep-eps.csv", csv.str()}};
    return out;
  }
  const SlowFastCombination sc = build_ccomb(cfg);
  const auto seeds = parse_list(pick(opt.lambda, cfg, "lambda", "0"));
  std::vector<std::string> header{"eps", "branch", "lambda", "lambda_in_range"};
  for (const auto& h : state_names(cfg.dim)) header.push_back(h);
  header.insert(header.end(), {"y", "distance", "residual", "error"});
  Csv csv(header);
  for (std::size_t b = 0; b < seeds.size(); ++b) {
    for (const auto& r : c_persistence_sweep(sc, x0, y0, seeds[b], eps)) {
      std::vector<std::string> row{num(r.eps), std::to_string(b)};
      if (r.ok) {
        row.insert(row.end(), {num(r.lambda), r.lambda_in_range ? "1" : "0"});
        append(row, r.x);
        row.insert(row.end(), {num(r.y), num(r.distance), num(r.residual), ""});
        ++out.pass;
      } else {
        append_blank(row, cfg.dim + 5);
        row.push_back("\"" + r.error + "\"");
        ++out.fail;
      }
      csv.row(row);
      out.text += "branch " + std::to_string(b) + " eps " + num(r.eps) +
                  (r.ok ? ": lambda = " + num(r.lambda) + ", x2 = " + num(r.x[1]) : ": " + r.error) +
                  "\n";
    }
  }
  out.files = {{"sweep-eps.csv", csv.str()}};
  return out;
}

Outputs cmd_csliding(const SystemConfig& cfg, const CommandOptions& opt) {
  ContinuousCombination cc;
  double eps_value = 0.0;
  if (cfg.kind == "ccomb" && !opt.eps.empty()) {
    eps_value = parse_list(opt.eps).at(0);
    const double y0 = parse_list(pick(opt.y0, cfg, "y0", "0")).at(0);
    cc = build_ccomb(cfg).at(y0, eps_value);
  } else {
    cc = build_combination(cfg);
  }
  const BranchTrack track =
      track_branches(cc, make_segment(cfg, opt, cc.base), sample_count(opt, cfg, 300));
  std::vector<std::string> header = state_names(cc.base.dim);
  header.insert(header.end(), {"eps", "branch", "lambda", "dK"});
  for (const auto& s : names_with("X", cc.base.dim)) header.push_back(s);
  Csv csv(header);
  for (const BranchSample& s : track.samples) {
    std::vector<std::string> row;
    append(row, s.point);
    row.insert(row.end(), {num(eps_value), std::to_string(s.branch), num(s.lambda), num(s.dK)});
    if (s.field.empty())
      append_blank(row, cc.base.dim);
    else
      append(row, s.field);
    csv.row(row);
  }
  Outputs out;
  out.files = {{"csliding.csv", csv.str()}};
  for (const auto& e : track.events) out.text += e + "\n";
  out.text += std::to_string(track.samples.size()) + " branch samples\n";
  return out;
}

Outputs cmd_check(const SystemConfig& cfg, const CommandOptions& opt) {
  Outputs out;
  Csv csv({"check", "result", "detail"});
  for (const CheckResult& c : run_checks(cfg, opt.seed)) {
    csv.row({c.name, c.pass ? "pass" : "fail", "\"" + c.detail + "\""});
    char line[256];
    std::snprintf(line, sizeof line, "%-4s  %-58s %s\n", c.pass ? "PASS" : "FAIL",
                  c.name.c_str(), c.detail.c_str());
    out.text += line;
    (c.pass ? out.pass : out.fail)++;
  }
  out.files = {{"check.csv", csv.str()}};
  return out;
}

}  // namespace

Outputs run_verb(const std::string& verb, const SystemConfig& cfg, const CommandOptions& opt) {
  if (verb == "classify") return cmd_classify(cfg, opt);
  if (verb == "slide") return cmd_slide(cfg, opt);
  if (verb == "regularize") return cmd_regularize(cfg, opt);
  if (verb == "blowup") return cmd_blowup(cfg, opt);
  if (verb == "integrate") return cmd_integrate(cfg, opt);
  if (verb == "equilibria") return cmd_equilibria(cfg, opt);
  if (verb == "sweep-delta") return cmd_sweep_delta(cfg, opt);
  if (verb == "sweep-eps") return cmd_sweep_eps(cfg, opt);
  if (verb == "csliding") return cmd_csliding(cfg, opt);
  if (verb == "check") return cmd_check(cfg, opt);
  throw Error(ErrorKind::InvalidArgument, "unknown verb '" + verb + "'");
}

namespace {

int examples_command(const std::string& action, const std::string& name, std::ostream& out,
                     std::ostream& err) {
  if (action == "list") {
    for (const auto& e : registry()) {
      char line[160];
      std::snprintf(line, sizeof line, "%-10s  %s\n", e.name.c_str(), e.description.c_str());
      out << line;
    }
    return 0;
  }
  if (action == "show") {
    const RegistryEntry* e = find_example(name);
    if (!e) {
      err << "error: unknown example '" << name << "'\n";
      return 2;
    }
    out << serialize(parse_config(e->text, e->name));
    return 0;
  }
  err << "error: examples takes 'list' or 'show NAME'\n";
  return 2;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Piecewise-smooth and non-smooth slow-fast systems", "nsdyn"};
  app.require_subcommand(1);
  CommandOptions opt;
  std::string system, out_dir = ".";
  std::string ex_action, ex_name;

  for (const std::string& verb : system_verbs()) {
    CLI::App* sub = app.add_subcommand(verb, "run " + verb);
    sub->add_option("system", system, "registry name or config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "seed for randomized checks");
    sub->add_option("--range", opt.range, "segment of Sigma, e.g. x2=-1:2");
    sub->add_option("--n", opt.n, "number of samples");
    sub->add_option("--at", opt.at, "base point of the segment");
    sub->add_option("--delta", opt.delta, "delta values");
    sub->add_option("--eps", opt.eps, "eps values");
    sub->add_option("--x0", opt.x0, "initial condition or Newton seed");
    sub->add_option("--point", opt.point, "equilibrium to continue");
    sub->add_option("--lambda", opt.lambda, "lambda seeds");
    sub->add_option("--y0", opt.y0, "fast variable seed");
    sub->add_option("--family", opt.family, "st, r or nonlinear");
    sub->add_option("--orbit-seed", opt.orbit_seed, "periodic orbit seed");
    sub->add_option("--t-end", opt.t_end, "final time");
    sub->add_option("--rtol", opt.rtol, "relative tolerance");
    sub->add_option("--atol", opt.atol, "absolute tolerance");
  }
  CLI::App* ex = app.add_subcommand("examples", "list or show the built-in systems");
  ex->add_option("action", ex_action, "list | show")->required();
  ex->add_option("name", ex_name, "example name");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (ex->parsed()) return examples_command(ex_action, ex_name, out, err);

  std::string verb;
  for (const std::string& v : system_verbs())
    if (app.got_subcommand(v)) verb = v;

  SystemConfig cfg;
  try {
    cfg = resolve_system(system);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidArgument ? 2 : 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Outputs res;
  int code = 0;
  std::string message;
  try {
    res = run_verb(verb, cfg, opt);
    if (verb == "check" && res.fail > 0) code = 1;
  } catch (const Error& e) {
    message = std::string(to_string(e.kind())) + ": " + e.what();
    err << "error: " << message << "\n";
    code = 1;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::ordered_json summary;
  summary["command"] = verb;
  summary["system"] = cfg.name.empty() ? system : cfg.name;
  summary["config_hash"] = config_hash(cfg);
  summary["wall_time_s"] = wall;
  summary["outputs"] = nlohmann::json::array();
  try {
    namespace fs = std::filesystem;
    for (const auto& [name, contents] : res.files) {
      const std::string path = (fs::path(out_dir) / name).string();
      write_atomic(path, contents);
      summary["outputs"].push_back(path);
    }
    summary["pass"] = res.pass;
    summary["fail"] = res.fail;
    summary["exit_code"] = code;
    if (!message.empty()) summary["error"] = message;
    write_atomic((fs::path(out_dir) / (verb + ".json")).string(), summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  out << res.text;
  return code;
}

}  // namespace nsdyn::cli
