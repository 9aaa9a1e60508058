#include "grood/cli.hpp"

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grood/bench.hpp"
#include "grood/core.hpp"
#include "grood/grassmann.hpp"
#include "grood/io.hpp"
#include "grood/streaming.hpp"

namespace grood::cli {

namespace {

struct UpdateArgs {
  std::string u, w, ab, out_u, out_w;
  double tol = UpdateOptions{}.deflation_tol;
};

struct TrackArgs {
  std::string u, w, stream, method = "geodesic", report, out_u, out_w;
  std::size_t reorth_every = 0;
  double tol = UpdateOptions{}.deflation_tol;
};

struct DistArgs {
  std::string u, v;
  bool angles = false;
};

struct BenchArgs {
  std::vector<std::size_t> n, p;
  std::size_t reps = 0;
  std::string method = "geodesic";
  std::uint64_t seed = 1;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

Factorization load_factorization(const std::string& u_path, const std::string& w_path) {
  OrthonormalFactor u(io::read_matrix(u_path));
  Matrix w = io::read_matrix(w_path);
  require_dims(w.rows() == u.cols() && w.cols() == u.cols(),
               "W must be p x p with p = columns of U");
  return Factorization(std::move(u), std::move(w));
}

void check_stream(const io::UpdateStream& s, const Factorization& f) {
  require_dims(s.n == f.n() && s.p == f.p(), "update stream header does not match U");
}

TrackMethod method_or_throw(const std::string& name) {
  const auto m = parse_track_method(name);
  if (!m) throw_error(ErrorKind::InvalidArgument, "unknown method '" + name + "'");
  return *m;
}

int cmd_update(const UpdateArgs& args, std::ostream& out) {
  Factorization f = load_factorization(args.u, args.w);
  const io::UpdateStream s = io::read_update_stream(args.ab);
  check_stream(s, f);
  if (s.updates.size() != 1) {
    throw_error(ErrorKind::InvalidArgument,
                "--ab must hold exactly one update, found " + std::to_string(s.updates.size()));
  }
  UpdateOptions opts;
  opts.deflation_tol = args.tol;
  const UpdateOutcome res = grood_update(std::move(f), s.updates.front(), opts);
  io::write_matrix(args.out_u, res.factorization.u().mat());
  io::write_matrix(args.out_w, res.factorization.w());
  out << "distance_rad=" << io::format_double(res.distance) << '\n';
  out << "kind=" << to_string(res.kind) << '\n';
  return kExitOk;
}

int cmd_track(const TrackArgs& args, std::ostream& out) {
  TrackerConfig cfg;
  cfg.method = method_or_throw(args.method);
  cfg.reorth_every = args.reorth_every;
  cfg.deflation_tol = args.tol;
  Factorization f = load_factorization(args.u, args.w);
  const io::UpdateStream s = io::read_update_stream(args.stream);
  check_stream(s, f);

  const TrackResult res = track(std::move(f), s.updates, cfg);
  std::ofstream report(args.report);
  if (!report) throw_error(ErrorKind::InvalidArgument, "cannot write " + args.report);
  io::write_report_csv(report, res.reports);
  if (!args.out_u.empty()) io::write_matrix(args.out_u, res.factorization.u().mat());
  if (!args.out_w.empty()) io::write_matrix(args.out_w, res.factorization.w());
  out << "steps=" << res.reports.size() << '\n';
  return kExitOk;
}

int cmd_dist(const DistArgs& args, std::ostream& out) {
  const OrthonormalFactor u(io::read_matrix(args.u));
  const OrthonormalFactor v(io::read_matrix(args.v));
  require_dims(u.rows() == v.rows() && u.cols() == v.cols(),
               "--u and --v must have the same shape");
  const PrincipalAngles pa = principal_angles(u, v);
  out << "distance_rad=" << io::format_double(linalg::nrm2(pa.thetas)) << '\n';
  if (args.angles) {
    out << "angles=";
    for (std::size_t i = 0; i < pa.thetas.size(); ++i) {
      if (i) out << ' ';
      out << io::format_double(pa.thetas[i]);
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  const TrackMethod method = method_or_throw(args.method);
  if (args.reps == 0) throw_error(ErrorKind::InvalidArgument, "--reps must be positive");
  for (auto n : args.n)
    for (auto p : args.p)
      if (p == 0 || p >= n)
        throw_error(ErrorKind::InvalidArgument, "bench needs 1 <= p < n for every pair");

  out << "n,p,method,median_ns,mean_ns\n";
  for (auto n : args.n) {
    for (auto p : args.p) {
      const auto row = bench::time_updates(n, p, args.reps, method, args.seed);
      out << row.n << ',' << row.p << ',' << to_string(row.method) << ','
          << io::format_double(row.median_ns) << ',' << io::format_double(row.mean_ns)
          << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-one updates of orthogonal factorizations X = U W", "grood"};
  app.require_subcommand(1);

  UpdateArgs ua;
  auto* update = app.add_subcommand("update", "apply one rank-one update");
  update->add_option("--u", ua.u, "n x p orthonormal factor")->required();
  update->add_option("--w", ua.w, "p x p factor")->required();
  update->add_option("--ab", ua.ab, "update stream with one record")->required();
  update->add_option("--out-u", ua.out_u)->required();
  update->add_option("--out-w", ua.out_w)->required();
  update->add_option("--tol", ua.tol, "relative residual threshold for a in ran(U)");

  TrackArgs ta;
  auto* trk = app.add_subcommand("track", "apply an update stream");
  trk->add_option("--u", ta.u)->required();
  trk->add_option("--w", ta.w)->required();
  trk->add_option("--stream", ta.stream)->required();
  trk->add_option("--method", ta.method, "geodesic, brand, kaufman or refactor");
  trk->add_option("--reorth-every", ta.reorth_every, "0 disables re-orthogonalization");
  trk->add_option("--report", ta.report, "CSV report path")->required();
  trk->add_option("--out-u", ta.out_u);
  trk->add_option("--out-w", ta.out_w);
  trk->add_option("--tol", ta.tol);

  DistArgs da;
  auto* dist = app.add_subcommand("dist", "subspace distance between ran(U) and ran(V)");
  dist->add_option("--u", da.u)->required();
  dist->add_option("--v", da.v)->required();
  dist->add_flag("--angles", da.angles, "also print the principal angles");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "time random updates");
  bench->add_option("--n", ba.n, "comma-separated row counts")->required()->delimiter(',');
  bench->add_option("--p", ba.p, "comma-separated column counts")->required()->delimiter(',');
  bench->add_option("--reps", ba.reps)->required();
  bench->add_option("--method", ba.method);
  bench->add_option("--seed", ba.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*update) return cmd_update(ua, out);
    if (*trk) return cmd_track(ta, out);
    if (*dist) return cmd_dist(da, out);
    return cmd_bench(ba, out);
  } catch (const TrackError& e) {
    if (e.kind() == ErrorKind::Deflating) {
      err << "error: deflating update at step " << e.step() << '\n';
    } else {
      err << "error: " << e.what() << '\n';
    }
    return exit_code_for(e.kind());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Deflating) {
      err << "error: deflating update\n";
    } else {
      err << "error: " << e.what() << '\n';
    }
    return exit_code_for(e.kind());
  }
}

}  // namespace grood::cli
