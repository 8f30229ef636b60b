#include <set>

#include <hypercross/smolyak.hpp>

#include "commands.hpp"
#include "output.hpp"

namespace hypercross::cli {

namespace {

/// |Q_n| = sum over |j|_1 <= n of prod_i |block(j_i)|, with |block(0)| = 1 and |block(j)| = 2^j.
std::uint64_t cross_cardinality(int n, int dim) {
  // ways[m] = sum over j in Z_+^axes with |j|_1 = m of the block-size product.
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int axis = 0; axis < dim; ++axis) {
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (int m = 0; m <= n; ++m) {
      for (int j = 0; j <= m; ++j) {
        const std::uint64_t block = j == 0 ? 1 : std::uint64_t{1} << j;
        next[static_cast<std::size_t>(m)] += block * ways[static_cast<std::size_t>(m - j)];
      }
    }
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total += w;
  return total;
}

/// Union of all grid nodes over |j|_1 <= n, each node scaled to an integer on the level-n axis grid.
std::size_t brute_force_union(int n, int dim) {
  std::set<std::vector<std::int64_t>> nodes;
  for (const auto& j : simplex_levels(n, dim)) {
    const DyadicGrid grid(j);
    std::vector<std::int64_t> idx(static_cast<std::size_t>(dim));
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      std::size_t rest = flat;
      for (int axis = dim - 1; axis >= 0; --axis) {
        const std::size_t len = std::size_t{1} << j[axis];
        const auto m = static_cast<std::int64_t>(rest % len) - static_cast<std::int64_t>(len / 2);
        rest /= len;
        idx[static_cast<std::size_t>(axis)] = m * (std::int64_t{1} << (n - j[axis]));
      }
      nodes.insert(idx);
    }
  }
  return nodes.size();
}

}  // namespace

int cmd_grid_info(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const GridInfoConfig& gc = cfg.grid_info;
  const int d = cfg.dim;
  const QuasiInterpOp op = build_operator(cfg);
  OutputSink out(ctx.out);
  out.line("grid-info: d=" + std::to_string(d) + ", n=0.." + std::to_string(gc.n_max));
  out.line(pad("n", 5) + pad("sparse grid", 16) + pad("|Q_n|", 16) + "check");

  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  for (int n = 0; n <= gc.n_max; ++n) {
    const std::uint64_t grid = smolyak_grid_size(n, d);
    const std::uint64_t cross = cross_cardinality(n, d);
    std::string check = "-";
    nlohmann::json row{{"n", n}, {"grid_size", grid}, {"cross_cardinality", cross}};
    if (d == 1) {
      const bool match = grid == (std::uint64_t{1} << n) && cross == (std::uint64_t{2} << n) - 1;
      row["closed_form_match"] = match;
      check = match ? "closed form ok" : "closed form MISMATCH";
      ok = ok && match;
    } else if (n <= gc.brute_force_max) {
      const bool match = brute_force_union(n, d) == grid && hyperbolic_cross(n, d).size() == cross;
      row["brute_force_match"] = match;
      check = match ? "brute force ok" : "brute force MISMATCH";
      ok = ok && match;
    }
    out.line(pad(std::to_string(n), 5) + pad(std::to_string(grid), 16) + pad(std::to_string(cross), 16) + check);
    rows.push_back(row);
  }

  const SmolyakPlan plan = combination_plan(gc.n_max, d);
  long sum = 0;
  out.line("combination plan for n=" + std::to_string(gc.n_max) + " (" + std::to_string(plan.terms.size()) + " terms):");
  for (const auto& t : plan.terms) {
    sum += t.coefficient;
    std::string j = "(";
    for (int i = 0; i < d; ++i) j += (i ? "," : "") + std::to_string(t.j[i]);
    out.line("  " + pad(j + ")", 24) + std::to_string(t.coefficient));
  }
  const bool sum_ok = sum == 1;
  ok = ok && sum_ok;
  out.line("coefficient sum = " + std::to_string(sum) + (sum_ok ? " (ok)" : " (expected 1)"));

  nlohmann::json doc = metadata(cfg, "grid-info", op);
  doc["rows"] = rows;
  doc["plan"] = nlohmann::json::parse(plan_to_json(plan));
  doc["plan_coefficient_sum"] = sum;
  doc["pass"] = ok;
  out.write_json("grid_info.json", doc);
  out.line(ok ? "result: PASS" : "result: FAIL");
  out.flush_summary();
  return ok ? 0 : 1;
}

}  // namespace hypercross::cli
