#include "hhs/graph.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <mutex>
#include <queue>

#include "hhs/errors.hpp"

namespace hhs {

namespace {
std::atomic<std::size_t> g_dense_budget{3000};
constexpr std::size_t kMemoCells = std::size_t{1} << 24;
}  // namespace

Length DistRow::at(Vertex v) const {
  if (!reachable(v)) throw UnreachableError("vertex " + std::to_string(v) + " unreachable");
  return Length::from_ticks((*this)[v]);
}

struct FiniteMetricGraph::Impl {
  std::vector<std::string> ids;
  std::unordered_map<std::string, Vertex> index;
  std::unordered_map<Vertex, std::string> labels;
  std::vector<std::size_t> offs{0};
  std::vector<Arc> arcs;
  std::int64_t unit = 0;  // common weight, or 0 when mixed
  std::vector<int> comp;
  int components = 0;

  std::once_flag dense_once;
  std::vector<std::int64_t> table;
  bool use_dense = false;

  std::mutex memo_mu;
  std::map<Vertex, std::shared_ptr<const std::vector<std::int64_t>>> memo;
  std::deque<Vertex> memo_order;

  std::size_t n() const { return ids.size(); }

  void sssp(const std::vector<Vertex>& sources, std::int64_t* out) const {
    const std::size_t N = n();
    std::fill(out, out + N, DistRow::kFar);
    if (unit > 0) {
      std::vector<Vertex> q;
      q.reserve(N);
      for (Vertex s : sources)
        if (out[s] != 0) {
          out[s] = 0;
          q.push_back(s);
        }
      for (std::size_t h = 0; h < q.size(); ++h) {
        Vertex u = q[h];
        std::int64_t du = out[u] + unit;
        for (std::size_t k = offs[u]; k < offs[u + 1]; ++k) {
          Vertex v = arcs[k].to;
          if (out[v] == DistRow::kFar) {
            out[v] = du;
            q.push_back(v);
          }
        }
      }
      return;
    }
    using Item = std::pair<std::int64_t, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (Vertex s : sources) {
      out[s] = 0;
      pq.emplace(0, s);
    }
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != out[u]) continue;
      for (std::size_t k = offs[u]; k < offs[u + 1]; ++k) {
        const Arc& a = arcs[k];
        std::int64_t nd = du + a.w;
        if (nd < out[a.to]) {
          out[a.to] = nd;
          pq.emplace(nd, a.to);
        }
      }
    }
  }

  void ensure_dense() {
    std::call_once(dense_once, [this] {
      const std::size_t N = n();
      table.assign(N * N, 0);
      for (std::size_t s = 0; s < N; ++s) sssp({static_cast<Vertex>(s)}, table.data() + s * N);
    });
  }
};

FiniteMetricGraph::FiniteMetricGraph() : impl_(std::make_shared<Impl>()) {}

std::size_t FiniteMetricGraph::size() const { return impl_->n(); }
const std::string& FiniteMetricGraph::id(Vertex v) const { return impl_->ids.at(static_cast<std::size_t>(v)); }

std::optional<Vertex> FiniteMetricGraph::find(const std::string& id) const {
  auto it = impl_->index.find(id);
  if (it == impl_->index.end()) return std::nullopt;
  return it->second;
}

Vertex FiniteMetricGraph::at(const std::string& id) const {
  auto v = find(id);
  if (!v) throw ParseError("unknown vertex id '" + id + "'");
  return *v;
}

const std::string* FiniteMetricGraph::label(Vertex v) const {
  auto it = impl_->labels.find(v);
  return it == impl_->labels.end() ? nullptr : &it->second;
}

std::span<const Arc> FiniteMetricGraph::neighbors(Vertex v) const {
  const auto& o = impl_->offs;
  return {impl_->arcs.data() + o[v], o[v + 1] - o[v]};
}

std::size_t FiniteMetricGraph::edge_count() const { return impl_->arcs.size() / 2; }
bool FiniteMetricGraph::unit_weight() const { return impl_->unit == Length::kScale || impl_->arcs.empty(); }
bool FiniteMetricGraph::connected() const { return impl_->components <= 1; }
int FiniteMetricGraph::component(Vertex v) const { return impl_->comp.at(static_cast<std::size_t>(v)); }

bool FiniteMetricGraph::dense() const { return impl_->use_dense; }

void FiniteMetricGraph::set_dense_budget(std::size_t n) { g_dense_budget = n; }
std::size_t FiniteMetricGraph::dense_budget() { return g_dense_budget; }

DistRow FiniteMetricGraph::row(Vertex s) const {
  Impl& m = *impl_;
  const std::size_t N = m.n();
  if (s < 0 || static_cast<std::size_t>(s) >= N) throw std::out_of_range("vertex out of range");
  if (m.use_dense) {
    m.ensure_dense();
    return DistRow(impl_, m.table.data() + static_cast<std::size_t>(s) * N, N);
  }
  {
    std::lock_guard lk(m.memo_mu);
    auto it = m.memo.find(s);
    if (it != m.memo.end()) return DistRow(it->second);
  }
  auto v = std::make_shared<std::vector<std::int64_t>>(N);
  m.sssp({s}, v->data());
  std::lock_guard lk(m.memo_mu);
  auto [it, inserted] = m.memo.emplace(s, v);
  if (inserted) {
    m.memo_order.push_back(s);
    std::size_t cap = std::max<std::size_t>(4, kMemoCells / std::max<std::size_t>(1, N));
    while (m.memo_order.size() > cap) {
      m.memo.erase(m.memo_order.front());
      m.memo_order.pop_front();
    }
  }
  return DistRow(it->second);
}

DistRow FiniteMetricGraph::row_to_set(const VertexSet& s) const {
  auto v = std::make_shared<std::vector<std::int64_t>>(impl_->n());
  impl_->sssp(s, v->data());
  return DistRow(std::move(v));
}

std::int64_t FiniteMetricGraph::dt(Vertex u, Vertex v) const {
  Impl& m = *impl_;
  const std::size_t N = m.n();
  std::int64_t r;
  if (m.use_dense) {
    m.ensure_dense();
    r = m.table[static_cast<std::size_t>(u) * N + static_cast<std::size_t>(v)];
  } else {
    r = row(u)[v];
  }
  if (r == DistRow::kFar) throw UnreachableError("unreachable pair " + id(u) + " / " + id(v));
  return r;
}

Length FiniteMetricGraph::d(Vertex u, Vertex v) const { return Length::from_ticks(dt(u, v)); }

std::optional<Length> FiniteMetricGraph::dist(Vertex u, Vertex v) const {
  if (impl_->comp[u] != impl_->comp[v]) return std::nullopt;
  return d(u, v);
}

Vertex GraphBuilder::add_vertex(const std::string& id) {
  if (index_.count(id)) throw ParseError("duplicate vertex id '" + id + "'");
  Vertex v = static_cast<Vertex>(ids_.size());
  ids_.push_back(id);
  index_.emplace(id, v);
  adj_.emplace_back();
  return v;
}

Vertex GraphBuilder::ensure_vertex(const std::string& id) {
  auto it = index_.find(id);
  return it != index_.end() ? it->second : add_vertex(id);
}

std::optional<Vertex> GraphBuilder::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void GraphBuilder::set_label(Vertex v, std::string tag) { labels_[v] = std::move(tag); }

void GraphBuilder::add_edge(Vertex u, Vertex v, Length w) {
  if (u == v) throw StructuralError("self-loop at '" + ids_.at(static_cast<std::size_t>(u)) + "'");
  if (w.ticks() <= 0) throw StructuralError("non-positive edge weight");
  auto put = [&](Vertex a, Vertex b) {
    auto [it, ins] = adj_[static_cast<std::size_t>(a)].emplace(b, w.ticks());
    if (!ins) it->second = std::min(it->second, w.ticks());
  };
  put(u, v);
  put(v, u);
}

void GraphBuilder::add_edge(const std::string& u, const std::string& v, Length w) {
  auto a = find(u), b = find(v);
  if (!a) throw ParseError("edge references unknown vertex '" + u + "'");
  if (!b) throw ParseError("edge references unknown vertex '" + v + "'");
  add_edge(*a, *b, w);
}

FiniteMetricGraph GraphBuilder::build() const {
  FiniteMetricGraph g;
  auto& m = *g.impl_;
  m.ids = ids_;
  m.index = index_;
  m.labels = labels_;
  const std::size_t N = ids_.size();
  m.offs.assign(N + 1, 0);
  bool first = true;
  for (std::size_t u = 0; u < N; ++u) {
    std::vector<Arc> row;
    row.reserve(adj_[u].size());
    for (auto [v, w] : adj_[u]) {
      row.push_back({v, w});
      if (first) {
        m.unit = w;
        first = false;
      } else if (m.unit != w) {
        m.unit = 0;
      }
    }
    std::sort(row.begin(), row.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
    m.arcs.insert(m.arcs.end(), row.begin(), row.end());
    m.offs[u + 1] = m.arcs.size();
  }
  if (first) m.unit = Length::kScale;
  m.comp.assign(N, -1);
  for (std::size_t s = 0; s < N; ++s) {
    if (m.comp[s] >= 0) continue;
    std::vector<Vertex> st{static_cast<Vertex>(s)};
    m.comp[s] = m.components;
    while (!st.empty()) {
      Vertex u = st.back();
      st.pop_back();
      for (std::size_t k = m.offs[u]; k < m.offs[u + 1]; ++k)
        if (m.comp[m.arcs[k].to] < 0) {
          m.comp[m.arcs[k].to] = m.components;
          st.push_back(m.arcs[k].to);
        }
    }
    ++m.components;
  }
  m.use_dense = N <= g_dense_budget.load();
  return g;
}

nlohmann::json graph_to_json(const FiniteMetricGraph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (std::size_t v = 0; v < g.size(); ++v) j["vertices"].push_back(g.id(static_cast<Vertex>(v)));
  j["edges"] = nlohmann::json::array();
  for (std::size_t u = 0; u < g.size(); ++u)
    for (const Arc& a : g.neighbors(static_cast<Vertex>(u)))
      if (static_cast<std::size_t>(a.to) > u)
        j["edges"].push_back({g.id(static_cast<Vertex>(u)), g.id(a.to), Length::from_ticks(a.w)});
  nlohmann::json labels = nlohmann::json::object();
  for (std::size_t v = 0; v < g.size(); ++v)
    if (auto* l = g.label(static_cast<Vertex>(v))) labels[g.id(static_cast<Vertex>(v))] = *l;
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

namespace {
std::string id_of(const nlohmann::json& x) {
  if (x.is_string()) return x.get<std::string>();
  if (x.is_number_integer()) return std::to_string(x.get<std::int64_t>());
  throw ParseError("vertex id must be a string or integer, got " + x.dump());
}
}  // namespace

FiniteMetricGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices")) throw ParseError("graph: missing 'vertices'");
  GraphBuilder b;
  for (const auto& v : j.at("vertices")) b.add_vertex(id_of(v));
  if (j.contains("edges")) {
    std::size_t k = 0;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3)
        throw ParseError("graph: edge #" + std::to_string(k) + " must be [u,v] or [u,v,w]");
      Length w = Length::units(1);
      if (e.size() == 3) {
        try {
          w = e[2].get<Length>();
        } catch (const std::exception& ex) {
          throw ParseError("graph: edge #" + std::to_string(k) + ": " + ex.what());
        }
      }
      b.add_edge(id_of(e[0]), id_of(e[1]), w);
      ++k;
    }
  }
  if (j.contains("labels"))
    for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it) {
      auto v = b.find(it.key());
      if (!v) throw ParseError("graph: label for unknown vertex '" + it.key() + "'");
      b.set_label(*v, it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
    }
  return b.build();
}

VertexSet normalized(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool contains(const VertexSet& s, Vertex v) { return std::binary_search(s.begin(), s.end(), v); }

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

VertexSet all_vertices(const FiniteMetricGraph& g) {
  VertexSet r(g.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<Vertex>(i);
  return r;
}

FiniteMetricGraph induced_subgraph(const FiniteMetricGraph& g, const VertexSet& s) {
  GraphBuilder b;
  for (Vertex v : s) {
    Vertex nv = b.add_vertex(g.id(v));
    if (auto* l = g.label(v)) b.set_label(nv, *l);
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    for (const Arc& a : g.neighbors(s[i])) {
      auto it = std::lower_bound(s.begin(), s.end(), a.to);
      if (it != s.end() && *it == a.to && a.to > s[i])
        b.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(it - s.begin()), Length::from_ticks(a.w));
    }
  return b.build();
}

}  // namespace hhs
