#include "lccp/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <iterator>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace lccp {

namespace {

constexpr double kTriangleSlack = 1e-9;

std::string entry_name(int i, int j) {
  return "travel[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

double parse_number(const std::string& token, const std::string& what) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("cannot parse " + what + ": '" + token + "'");
  }
  return value;
}

}  // namespace

Instance::Instance(std::vector<double> travel, std::vector<double> crit, bool is_metric)
    : n_(static_cast<int>(crit.size())),
      travel_(std::move(travel)),
      crit_(std::move(crit)),
      is_metric_(is_metric) {
  if (n_ < 1) throw ValidationError("instance needs at least one node");
  if (travel_.size() != static_cast<std::size_t>(n_) * n_) {
    throw ValidationError("travel matrix has " + std::to_string(travel_.size()) +
                          " entries, expected " + std::to_string(n_ * n_));
  }
  for (int i = 0; i < n_; ++i) {
    if (!std::isfinite(crit_[i]) || crit_[i] <= 0.0) {
      throw ValidationError("critical time of node " + std::to_string(i) +
                            " must be positive and finite");
    }
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double t = this->travel(i, j);
      if (!std::isfinite(t) || t < 0.0) {
        throw ValidationError(entry_name(i, j) + " must be nonnegative and finite");
      }
      if (i == j && t != 0.0) throw ValidationError(entry_name(i, j) + " must be zero");
      if (t != this->travel(j, i)) {
        throw ValidationError(entry_name(i, j) + " differs from " + entry_name(j, i));
      }
    }
  }
  if (is_metric_ && !satisfies_triangle_inequality()) {
    throw ValidationError("instance is flagged metric but violates the triangle inequality");
  }
}

bool Instance::satisfies_triangle_inequality() const {
  for (int k = 0; k < n_; ++k) {
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        const double via = travel(i, k) + travel(k, j);
        if (travel(i, j) > via + kTriangleSlack * std::max(1.0, via)) return false;
      }
    }
  }
  return true;
}

NodeRelabeling NodeRelabeling::identity(int n) {
  NodeRelabeling r;
  r.forward.resize(n);
  std::iota(r.forward.begin(), r.forward.end(), 0);
  r.backward = r.forward;
  return r;
}

Instance load_instance(std::istream& in, InstanceFormat format) {
  if (format == InstanceFormat::json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed JSON instance: ") + e.what());
    }
    try {
      const int n = doc.at("n").get<int>();
      if (n < 1) throw ParseError("n must be at least 1");
      auto crit = doc.at("crit").get<std::vector<double>>();
      auto rows = doc.at("travel").get<std::vector<std::vector<double>>>();
      if (static_cast<int>(crit.size()) != n) {
        throw ParseError("crit has " + std::to_string(crit.size()) + " entries, expected " +
                         std::to_string(n));
      }
      if (static_cast<int>(rows.size()) != n) {
        throw ParseError("travel has " + std::to_string(rows.size()) + " rows, expected " +
                         std::to_string(n));
      }
      std::vector<double> travel;
      travel.reserve(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) {
          throw ParseError("travel row " + std::to_string(i) + " has " +
                           std::to_string(rows[i].size()) + " entries, expected " +
                           std::to_string(n));
        }
        travel.insert(travel.end(), rows[i].begin(), rows[i].end());
      }
      const bool metric = doc.value("metric", false);
      return Instance(std::move(travel), std::move(crit), metric);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON instance: ") + e.what());
    }
  }

  std::vector<std::string> tokens{std::istream_iterator<std::string>(in),
                                  std::istream_iterator<std::string>()};
  if (tokens.empty()) throw ParseError("empty instance");
  const double n_value = parse_number(tokens[0], "node count");
  if (n_value < 1 || n_value != std::floor(n_value) || n_value > 1e6) {
    throw ParseError("node count must be a positive integer, got '" + tokens[0] + "'");
  }
  const auto n = static_cast<std::size_t>(n_value);
  const std::size_t expected = 1 + n + n * n;
  if (tokens.size() != expected) {
    throw ParseError("expected " + std::to_string(expected) + " tokens for n=" +
                     std::to_string(n) + ", found " + std::to_string(tokens.size()));
  }
  std::vector<double> crit(n);
  for (std::size_t i = 0; i < n; ++i) {
    crit[i] = parse_number(tokens[1 + i], "critical time of node " + std::to_string(i));
  }
  std::vector<double> travel(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    travel[k] = parse_number(tokens[1 + n + k], entry_name(static_cast<int>(k / n),
                                                           static_cast<int>(k % n)));
  }
  return Instance(std::move(travel), std::move(crit), false);
}

InstanceFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".json") return InstanceFormat::json;
  return InstanceFormat::text;
}

Instance load_instance_file(const std::string& path, InstanceFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  return load_instance(in, format);
}

void save_instance(std::ostream& out, const Instance& inst, InstanceFormat format) {
  const int n = inst.n();
  if (format == InstanceFormat::json) {
    nlohmann::json doc;
    doc["n"] = n;
    doc["crit"] = inst.crit();
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rows[i][j] = inst.travel(i, j);
    doc["travel"] = rows;
    doc["metric"] = inst.is_metric();
    out << doc.dump() << '\n';
    return;
  }
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << n << '\n';
  for (int i = 0; i < n; ++i) out << (i ? " " : "") << inst.crit(i);
  out << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? " " : "") << inst.travel(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

Instance generate_euclidean(int n, std::uint64_t seed, double coord_range, double crit_low,
                            double crit_high) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(coord_range >= 0.0)) throw std::invalid_argument("coord_range must be nonnegative");
  if (!(crit_low > 0.0) || !(crit_low <= crit_high)) {
    throw std::invalid_argument("critical time bounds must satisfy 0 < low <= high");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, coord_range);
  std::vector<double> xs(n), ys(n), crit(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = coord(rng);
    ys[i] = coord(rng);
  }
  if (crit_low == crit_high) {
    std::fill(crit.begin(), crit.end(), crit_low);
  } else {
    std::uniform_real_distribution<double> crit_dist(crit_low, crit_high);
    for (int i = 0; i < n; ++i) crit[i] = crit_dist(rng);
  }
  std::vector<double> travel(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
      travel[static_cast<std::size_t>(i) * n + j] = d;
      travel[static_cast<std::size_t>(j) * n + i] = d;
    }
  }
  return Instance(std::move(travel), std::move(crit), true);
}

Instance metric_closure(const Instance& inst) {
  const int n = inst.n();
  std::vector<double> d = inst.travel_matrix();
  auto at = [&](int i, int j) -> double& { return d[static_cast<std::size_t>(i) * n + j]; };
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (at(i, k) + at(k, j) < at(i, j)) at(i, j) = at(i, k) + at(k, j);
  // Floating-point sums may differ by an ulp between (i,j) and (j,i).
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) at(j, i) = at(i, j) = std::min(at(i, j), at(j, i));
  return Instance(std::move(d), inst.crit(), true);
}

std::pair<Instance, NodeRelabeling> relabel_by_critical_time(const Instance& inst) {
  const int n = inst.n();
  NodeRelabeling r;
  r.backward.resize(n);
  std::iota(r.backward.begin(), r.backward.end(), 0);
  std::stable_sort(r.backward.begin(), r.backward.end(),
                   [&](int a, int b) { return inst.crit(a) < inst.crit(b); });
  r.forward.resize(n);
  for (int k = 0; k < n; ++k) r.forward[r.backward[k]] = k;

  std::vector<double> travel(static_cast<std::size_t>(n) * n);
  std::vector<double> crit(n);
  for (int a = 0; a < n; ++a) {
    crit[a] = inst.crit(r.backward[a]);
    for (int b = 0; b < n; ++b) {
      travel[static_cast<std::size_t>(a) * n + b] = inst.travel(r.backward[a], r.backward[b]);
    }
  }
  return {Instance(std::move(travel), std::move(crit), inst.is_metric()), std::move(r)};
}

CyclePartition map_partition(const Instance& target, const CyclePartition& part,
                             const NodeRelabeling& relabeling, bool to_new) {
  const auto& map = to_new ? relabeling.forward : relabeling.backward;
  CyclePartition out;
  for (const auto& c : part.cycles) {
    std::vector<int> nodes;
    nodes.reserve(c.nodes.size());
    for (int v : c.nodes) nodes.push_back(map.at(v));
    out.cycles.push_back(make_cycle(target, nodes, c.redcost_at_generation));
  }
  std::sort(out.cycles.begin(), out.cycles.end(),
            [](const Cycle& a, const Cycle& b) { return a.nodes < b.nodes; });
  return out;
}

PartitionVerdict validate_partition(const Instance& inst, const CyclePartition& part) {
  const int n = inst.n();
  std::vector<int> owner(n, -1);
  for (std::size_t c = 0; c < part.cycles.size(); ++c) {
    const auto& cyc = part.cycles[c];
    if (cyc.nodes.empty()) return {false, "cycle " + std::to_string(c) + " is empty"};
    for (int v : cyc.nodes) {
      if (v < 0 || v >= n) {
        return {false, "cycle " + std::to_string(c) + " references unknown node " +
                           std::to_string(v)};
      }
      if (owner[v] != -1) {
        return {false, "node " + std::to_string(v) + " appears more than once (cycles " +
                           std::to_string(owner[v]) + " and " + std::to_string(c) + ")"};
      }
      owner[v] = static_cast<int>(c);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (owner[v] == -1) return {false, "node " + std::to_string(v) + " is not covered"};
  }
  for (std::size_t c = 0; c < part.cycles.size(); ++c) {
    const auto& nodes = part.cycles[c].nodes;
    const double t = traversal_time(inst, nodes);
    const double q = min_critical_time(inst, nodes);
    if (t > q) {
      std::ostringstream os;
      os << std::setprecision(std::numeric_limits<double>::max_digits10) << "cycle " << c
         << ' ' << to_string(part.cycles[c]) << " has t(C)=" << t << " > q(C)=" << q;
      return {false, os.str()};
    }
  }
  return {true, "ok"};
}

std::string partition_to_json(const CyclePartition& part) {
  nlohmann::json doc;
  doc["objective"] = part.objective();
  auto cycles = nlohmann::json::array();
  for (const auto& c : part.cycles) cycles.push_back(c.nodes);
  doc["cycles"] = cycles;
  return doc.dump();
}

CyclePartition partition_from_json(const Instance& inst, const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    CyclePartition part;
    for (const auto& nodes_json : doc.at("cycles")) {
      auto nodes = nodes_json.get<std::vector<int>>();
      Cycle c;
      for (int v : nodes) {
        if (v < 0 || v >= inst.n()) {
          throw ParseError("solution references unknown node " + std::to_string(v));
        }
      }
      c.nodes = std::move(nodes);
      c.time = traversal_time(inst, c.nodes);
      c.min_crit = min_critical_time(inst, c.nodes);
      part.cycles.push_back(std::move(c));
    }
    if (doc.contains("objective") && doc.at("objective").get<int>() != part.objective()) {
      throw ParseError("solution objective " + doc.at("objective").dump() +
                       " does not match its " + std::to_string(part.objective()) + " cycles");
    }
    return part;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed solution JSON: ") + e.what());
  }
}

}  // namespace lccp
