// One line per acceptance criterion; exits 1 if any fails.
#include "ge_oracle.hpp"

#include "infocast/analytics/coupon.hpp"
#include "infocast/analytics/dissemination.hpp"
#include "infocast/cli/commands.hpp"
#include "infocast/cli/config_file.hpp"
#include "infocast/engine/harness.hpp"
#include "infocast/engine/metrics.hpp"
#include "infocast/engine/simulation.hpp"
#include "infocast/engine/validation.hpp"
#include "infocast/fountain/codec.hpp"
#include "infocast/fountain/overhead.hpp"
#include "infocast/fountain/prng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace infocast;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string &title, double budget_s, const std::function<Outcome()> &body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass)
    ++failures;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.1fs/%.0fs", secs, budget_s);
  std::cout << (pass ? "PASS" : "FAIL") << "  " << id << ". " << title << " | " << o.detail << " | " << timing
            << (in_time ? "" : " over budget") << std::endl;
}

std::string num(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

std::string line(const std::vector<engine::Check> &checks) {
  std::string s;
  for (const auto &c : checks)
    s += (s.empty() ? "" : "; ") + c.name + " " + num(c.empirical) + " vs " + num(c.analytic) + " (" +
         num(100 * c.rel_err, 2) + "% <= " + num(100 * c.tol, 2) + "%)";
  return s;
}

bool all_pass(const std::vector<engine::Check> &checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.pass; });
}

cli::KeyValues desk() { return cli::read_key_values(INFOCAST_CONFIG_DIR "/desk.conf"); }

constexpr std::uint64_t master_seed = 2024;

// Mean collected packets per eta on the recorded grid.
std::vector<double> collected_curve(const std::vector<engine::MetricsRecord> &recs) {
  std::vector<double> out;
  for (double eta : recs.front().eta_grid)
    out.push_back(engine::mean_collected(recs, eta));
  return out;
}

std::string curve_text(const std::vector<double> &c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i)
    s += (i ? " " : "") + num(c[i], 4);
  return s + "]";
}

} // namespace

int main() {
  engine::ValidationOptions opt;

  criterion(1, "coupon collector, uncoded (N=100, 2000 trials)", 5, [&] {
    const auto c = engine::check_coupon_uncoded(opt);
    return Outcome{all_pass(c), line(c)};
  });

  criterion(2, "coupon collector, erasure coded (N=10, r=1)", 5, [&] {
    const auto c = engine::check_coupon_erasure(opt);
    return Outcome{all_pass(c), line(c)};
  });

  criterion(3, "cluster statistics (lambda_s=0.01, R=200, 1e5 spacings)", 10, [&] {
    const auto c = engine::check_cluster_stats(opt);
    return Outcome{all_pass(c), line(c)};
  });

  criterion(4, "cluster meetings end to end (V0=30 pinned, L=20 km)", 60, [&] {
    const auto c = engine::check_cluster_meetings(opt);
    return Outcome{all_pass(c), line(c)};
  });

  criterion(5, "codec soundness vs GF(2) elimination; k=1000 overhead curve", 60, [&] {
    fountain::SplitMix64 g(55);
    int peeled = 0;
    int mismatches = 0;
    for (int inst = 0; inst < 1000; ++inst) {
      const std::size_t k = 1 + fountain::bounded(g, 32);
      const auto dist = std::make_shared<const fountain::DegreeDistribution>(fountain::robust_soliton(k, 0.03, 0.5));
      const auto msg = fountain::SourceMessage::random(0, k, 8, g());
      fountain::Decoder d(0, dist, 8);
      std::vector<fountain::ExplicitPacket> rows;
      const std::size_t budget = k + fountain::bounded(g, static_cast<std::uint32_t>(k + 4));
      for (std::size_t i = 0; i < budget; ++i) {
        const auto p = fountain::encode(msg, *dist, g());
        rows.push_back(fountain::to_explicit(p, *dist));
        d.push(p);
      }
      if (!d.complete())
        continue;
      ++peeled;
      const auto ge = oracle::ge_decode(k, 8, rows);
      if (!ge.packets || *ge.packets != msg.packets || d.message()->packets != msg.packets)
        ++mismatches;
    }
    const auto curve = fountain::measure_overhead(1000, fountain::robust_soliton(1000, 0.03, 0.5), 100, 7);
    bool monotone = true;
    for (std::size_t i = 1; i < curve.success_by_count.size(); ++i)
      monotone = monotone && curve.success_by_count[i] >= curve.success_by_count[i - 1];
    return Outcome{mismatches == 0 && peeled > 0 && monotone && curve.mean_overhead > 1.0,
                   std::to_string(peeled) + "/1000 peeled, " + std::to_string(mismatches) +
                       " oracle mismatches; k=1000 mean overhead " + num(curve.mean_overhead) +
                       (monotone ? ", curve monotone" : ", curve NOT monotone")};
  });

  criterion(6, "ALOHA peak 1/(2e) analytic, slotted simulation peak 1/e", 30, [&] {
    const auto c = engine::check_aloha(opt);
    return Outcome{all_pass(c), line(c)};
  });

  criterion(7, "uniform allocation is brute-force optimal (20 instances, B<=40, Delta<=6)", 60, [&] {
    const auto grid = engine::allocation_grid();
    int ok = 0;
    int reachable = 0;
    int floor_ok = 0;
    for (const auto &g : grid) {
      reachable += g.balanced_distance >= 0;
      ok += g.balanced_distance >= 0 && g.balanced_distance == g.brute_force_distance;
      floor_ok += g.floor_uniform_distance == g.brute_force_distance;
    }
    return Outcome{ok == 20 && reachable == 20 && grid.size() == 20,
                   std::to_string(ok) + "/20 even split optimal (" + std::to_string(reachable) +
                       " reachable); floor split optimal in " + std::to_string(floor_ok) + "/20"};
  });

  criterion(8, "scheme B (N_w=20) beats scheme A (D=0.2) on MDD, paired seeds", 600, [&] {
    auto kv_b = desk();
    auto kv_a = kv_b;
    kv_a["scheme"] = "A";
    kv_a.erase("window");
    kv_a["drop_fraction"] = "0.2";
    const auto a = engine::run_replications(cli::build_config(kv_a), 10, master_seed, 2);
    const auto b = engine::run_replications(cli::build_config(kv_b), 10, master_seed, 2);
    int wins = 0;
    for (std::size_t i = 0; i < 10; ++i)
      wins += engine::mdd(std::span(&b[i], 1)) > engine::mdd(std::span(&a[i], 1));
    const double ma = engine::mdd(a);
    const double mb = engine::mdd(b);
    return Outcome{wins >= 8 && mb > ma, "MDD B " + num(mb) + " m vs A " + num(ma) + " m; B ahead in " +
                                             std::to_string(wins) + "/10 replications"};
  });

  criterion(9, "buffer insensitivity, scheme B, B in {100,500,1000,1500}", 600, [&] {
    // Analytic path: the even split makes m_j/B independent of B.
    std::vector<std::vector<double>> analytic;
    for (std::int64_t buf : {100, 500, 1000, 1500}) {
      analytics::DisseminationParams p;
      p.buffer = buf;
      p.domain = 4;
      const auto alloc = analytics::optimal_allocation(buf, p.domain);
      std::vector<double> cum;
      double acc = 0;
      for (int j = p.domain; j >= 0; --j)
        cum.push_back(acc += analytics::expected_packets_per_segment(p, static_cast<double>(alloc.m[j])));
      analytic.push_back(cum);
    }
    const bool analytic_same = std::all_of(analytic.begin(), analytic.end(), [&](auto &c) { return c == analytic[0]; });

    std::vector<std::vector<double>> curves;
    for (const char *buf : {"100", "500", "1000", "1500"}) {
      auto kv = desk();
      kv["buffer_size"] = buf;
      curves.push_back(collected_curve(engine::run_replications(cli::build_config(kv), 5, master_seed, 2)));
    }
    double worst = 0;
    for (std::size_t i = 0; i < curves[0].size(); ++i) {
      double lo = curves[0][i], hi = lo, sum = 0;
      for (const auto &c : curves) {
        lo = std::min(lo, c[i]);
        hi = std::max(hi, c[i]);
        sum += c[i];
      }
      const double mean = sum / static_cast<double>(curves.size());
      if (mean > 0)
        worst = std::max(worst, (hi - lo) / mean);
    }
    std::string detail = std::string("analytic curves ") + (analytic_same ? "identical" : "DIFFER") +
                         "; simulated max pointwise spread " + num(100 * worst, 3) + "% (<= 15%); B=100 " +
                         curve_text(curves.front()) + ", B=1500 " + curve_text(curves.back());
    return Outcome{analytic_same && worst <= 0.15, detail};
  });

  criterion(10, "collected counts non-increasing in eta and in M (M in {10,30,50})", 600, [&] {
    std::vector<std::vector<double>> curves;
    for (const char *m : {"10", "30", "50"}) {
      auto kv = desk();
      kv["num_rsus"] = m;
      curves.push_back(collected_curve(engine::run_replications(cli::build_config(kv), 5, master_seed, 2)));
    }
    bool ok = true;
    for (const auto &c : curves)
      for (std::size_t i = 1; i < c.size(); ++i)
        ok = ok && c[i] <= c[i - 1];
    for (std::size_t i = 0; i < curves[0].size(); ++i)
      for (std::size_t m = 1; m < curves.size(); ++m)
        ok = ok && curves[m][i] <= curves[m - 1][i];
    return Outcome{ok, "M=10 " + curve_text(curves[0]) + ", M=30 " + curve_text(curves[1]) + ", M=50 " +
                           curve_text(curves[2])};
  });

  criterion(11, "run with a fixed seed is byte-identical across invocations", 60, [&] {
    const auto dir = fs::temp_directory_path() / "infocast_acceptance_determinism";
    fs::remove_all(dir);
    const std::string conf = INFOCAST_CONFIG_DIR "/desk.conf";
    std::ostringstream sink;
    auto invoke = [&](const std::string &out) {
      const char *argv[] = {"infocast", "run", "--config", conf.c_str(), "--seed", "42", "--out", out.c_str()};
      return cli::dispatch(8, argv, sink, sink);
    };
    const auto a = (dir / "a").string();
    const auto b = (dir / "b").string();
    const int ca = invoke(a);
    const int cb = invoke(b);
    auto slurp = [](const fs::path &p) {
      std::ifstream in(p, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const auto csv_a = slurp(fs::path(a) / "metrics.csv");
    const bool same = !csv_a.empty() && csv_a == slurp(fs::path(b) / "metrics.csv") &&
                      slurp(fs::path(a) / "manifest.txt") == slurp(fs::path(b) / "manifest.txt");
    return Outcome{ca == 0 && cb == 0 && same, std::string("exit ") + std::to_string(ca) + "/" + std::to_string(cb) +
                                                   ", metrics.csv " + std::to_string(csv_a.size()) + " bytes, " +
                                                   (same ? "identical" : "DIFFERENT")};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
