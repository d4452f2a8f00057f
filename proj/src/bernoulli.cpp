#include "parfell/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parfell/error.hpp"
#include "parfell/parallel.hpp"

namespace parfell {

BernoulliWindow::BernoulliWindow(GroupSpec group, std::size_t depth) : group_(std::move(group)) {
  if (!group_.is_free()) throw PreconditionError("Bernoulli windows are defined for free groups");
  if (depth > kMaxDepth) throw PreconditionError("window depth exceeds " + std::to_string(kMaxDepth));
  std::size_t radius = 0;
  std::vector<GroupElement> b = ball(group_, radius);
  while (b.size() < depth + 1) b = ball(group_, ++radius);
  coords_.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(depth + 1));
}

int BernoulliWindow::coord_index(const GroupElement& g) const {
  auto it = std::find(coords_.begin(), coords_.end(), g);
  return it == coords_.end() ? -1 : static_cast<int>(it - coords_.begin());
}

double metric(const BernoulliWindow& w, std::size_t x, std::size_t y) {
  if (x >= w.point_count() || y >= w.point_count()) throw MalformedInput("point outside the window");
  double d = 0.0;
  for (std::size_t k = 1; k <= w.depth(); ++k)
    if (w.value(x, k) != w.value(y, k)) d += std::ldexp(1.0, -static_cast<int>(k));
  return d;
}

std::vector<int> TruncatedBernoulli::apply(const GroupElement& t, std::size_t x) const {
  auto it = shifts.find(t);
  if (it == shifts.end()) throw UndeclaredElement("shift is not represented in this window");
  const GroupSpec& G = window.group();
  const int inv = window.coord_index(G.inverse(t));
  if (window.value(x, static_cast<std::size_t>(inv)) != 1) throw PreconditionError("point is outside U_{t^-1}");
  std::vector<int> out(window.depth() + 1, -1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const int src = it->second.source[k];
    if (src >= 0) out[k] = window.value(x, static_cast<std::size_t>(src));
  }
  return out;
}

TruncatedBernoulli build_truncated_bernoulli(const GroupSpec& group, std::size_t depth,
                                             const std::vector<GroupElement>& requested) {
  if (depth < 1) throw PreconditionError("truncated Bernoulli action needs depth N >= 1");
  TruncatedBernoulli tb{BernoulliWindow(group, depth), {}};
  const auto& w = tb.window;
  auto representable = [&](const GroupElement& t) {
    return w.coord_index(t) >= 0 && w.coord_index(group.inverse(t)) >= 0;
  };
  std::vector<GroupElement> elems = requested;
  if (elems.empty()) {
    for (const auto& t : w.coords())
      if (representable(t)) elems.push_back(t);
  }
  for (const auto& t : elems) {
    group.check(t);
    if (!representable(t))
      throw UndeclaredElement("window of depth " + std::to_string(depth) + " cannot represent '" + group.format(t) + "'");
    TruncatedShift sh{t, {}, {}};
    const auto kt = static_cast<std::size_t>(w.coord_index(t));
    for (std::size_t p = 0; p < w.point_count(); ++p)
      if (w.value(p, kt) == 1) sh.domain.push_back(p);
    const GroupElement tinv = group.inverse(t);
    for (const auto& c : w.coords()) sh.source.push_back(w.coord_index(group.multiply(tinv, c)));
    tb.shifts.emplace(t, std::move(sh));
  }
  return tb;
}

namespace {

FinitePartialAction quotient_action(const GroupSpec& gamma) {
  const std::size_t m = gamma.order();
  const std::size_t count = std::size_t{1} << (m - 1);
  const auto& table = gamma.table();
  std::map<GroupElement, ElementData> data;
  for (std::size_t g = 0; g < m; ++g) {
    const std::size_t ginv = gamma.inverse_index(g);
    ElementData d{{}, PartialMap::empty(count)};
    for (std::size_t z = 0; z < count; ++z) {
      const std::uint32_t mask = (static_cast<std::uint32_t>(z) << 1) | 1U;
      if ((mask >> g) & 1U) d.domain.push_back(static_cast<int>(z));
      if (!((mask >> ginv) & 1U)) continue;
      // eta_g(z)(h) = z(g^-1 h)
      std::uint32_t out = 0;
      for (std::size_t h = 0; h < m; ++h)
        if ((mask >> table[ginv][h]) & 1U) out |= 1U << h;
      d.map.image[z] = static_cast<int>(out >> 1);
    }
    data.emplace(GroupElement::from_index(g), std::move(d));
  }
  return FinitePartialAction(gamma, count, std::move(data));
}

}  // namespace

QuotientApprox::QuotientApprox(BernoulliWindow window, GroupHom hom)
    : window_(std::move(window)),
      hom_(std::move(hom)),
      action_([&] {
        if (!(hom_.source() == window_.group())) throw MalformedInput("hom source differs from the window group");
        if (hom_.target().order() > kMaxTarget)
          throw PreconditionError("quotient target has order above " + std::to_string(kMaxTarget));
        return quotient_action(hom_.target());
      }()) {}

int QuotientApprox::rho_value(std::size_t z, const GroupElement& g) const {
  return static_cast<int>((point(z) >> hom_.apply_index(g)) & 1U);
}

std::size_t QuotientApprox::rho_window(std::size_t z) const {
  std::size_t p = 0;
  const auto& c = window_.coords();
  for (std::size_t k = 1; k < c.size(); ++k)
    if (rho_value(z, c[k])) p |= std::size_t{1} << (k - 1);
  return p;
}

PartialMap QuotientApprox::eta(const GroupElement& t) const { return action_.element_map(hom_.apply(t)); }

std::vector<int> QuotientApprox::domain(const GroupElement& t) const { return action_.domain_of(hom_.apply(t)); }

EquivarianceCheck check_strict_equivariance(const QuotientApprox& q, const std::vector<GroupElement>& elements,
                                            std::size_t coord_radius) {
  const GroupSpec& G = q.window().group();
  const auto coords = ball(G, coord_radius);
  EquivarianceCheck r;
  r.elements_checked = elements.size();
  for (const auto& t : elements) {
    const auto V = q.domain(t);
    const PartialMap eta = q.eta(t);
    const GroupElement tinv = G.inverse(t);
    std::vector<GroupElement> shifted;
    shifted.reserve(coords.size());
    for (const auto& g : coords) shifted.push_back(G.multiply(tinv, g));
    for (std::size_t z = 0; z < q.size(); ++z) {
      const bool in_v = std::binary_search(V.begin(), V.end(), static_cast<int>(z));
      const bool in_u = q.rho_value(z, G.identity()) == 1 && q.rho_value(z, t) == 1;
      if (in_v != in_u) ++r.domain_mismatches;
      if (!eta.defined(static_cast<int>(z))) continue;
      const auto moved = static_cast<std::size_t>(eta(static_cast<int>(z)));
      for (std::size_t i = 0; i < coords.size(); ++i) {
        ++r.coordinates_checked;
        if (q.rho_value(moved, coords[i]) != q.rho_value(z, shifted[i])) ++r.value_mismatches;
      }
    }
  }
  return r;
}

std::size_t depth_for(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw PreconditionError("delta must be a positive number");
  std::size_t n = 0;
  while (!(std::ldexp(1.0, -static_cast<int>(n)) < delta)) {
    if (++n > BernoulliWindow::kMaxDepth) throw PreconditionError("delta needs a window deeper than the limit");
  }
  return n;
}

bool separates_window(const GroupHom& hom, const BernoulliWindow& window) {
  std::vector<std::size_t> images;
  for (const auto& t : window.coords()) images.push_back(hom.apply_index(t));
  std::sort(images.begin(), images.end());
  return std::adjacent_find(images.begin(), images.end()) == images.end();
}

RfdCertificate verify_rfd(const BernoulliWindow& window, const GroupHom& hom, double delta, std::size_t jobs) {
  RfdCertificate c;
  c.delta = delta;
  c.depth = window.depth();
  c.tail_bound = std::ldexp(1.0, -static_cast<int>(c.depth));
  c.hom = hom;
  c.target = hom.target().describe();

  const QuotientApprox q(window, hom);
  c.quotient_points = q.size();
  c.action_valid = validate(q.action()).valid();

  std::size_t radius = 0;
  for (const auto& t : window.coords()) radius = std::max(radius, t.length());
  c.equivariance_defect = check_strict_equivariance(q, window.coords(), 2 * radius + 1).defect();

  const bool separated = separates_window(hom, window);
  const std::size_t count = window.point_count();
  std::vector<double> dist(count, 0.0);
  parallel_for(count, jobs, [&](std::size_t x) {
    // z_x(phi(t_k)) = x(t_k), zero off the image of the window.
    std::uint32_t mask = 1U;
    for (std::size_t k = 1; k <= window.depth(); ++k)
      if (window.value(x, k)) mask |= 1U << hom.apply_index(window.coords()[k]);
    dist[x] = metric(window, q.rho_window(q.index_of(mask)), x);
  });
  c.points_checked = count;
  c.window_distance = *std::max_element(dist.begin(), dist.end());
  c.density_bound = c.window_distance + c.tail_bound;

  if (!separated)
    c.reason = "phi does not separate the window";
  else if (!c.action_valid)
    c.reason = "quotient action failed validation";
  else if (c.equivariance_defect != 0)
    c.reason = "rho is not strictly equivariant";
  else if (!(c.density_bound < delta))
    c.reason = "density bound not below delta";
  c.valid = c.reason.empty();
  return c;
}

RfdCertificate certify_rfd(const GroupSpec& group, double delta, const std::optional<GroupHom>& hom,
                           const std::vector<GroupSpec>& extra, std::size_t jobs) {
  const std::size_t depth = depth_for(delta);
  const BernoulliWindow window(group, depth);
  if (hom) return verify_rfd(window, *hom, delta, jobs);

  std::vector<GroupSpec> candidates{GroupSpec::trivial()};
  for (std::size_t n = 2; n <= 12; ++n) candidates.push_back(GroupSpec::cyclic(n));
  for (std::size_t a = 2; a <= 8; ++a)
    for (std::size_t b = a; a * b <= QuotientApprox::kMaxTarget; ++b)
      candidates.push_back(GroupSpec::direct_product(GroupSpec::cyclic(a), GroupSpec::cyclic(b)));
  candidates.insert(candidates.end(), extra.begin(), extra.end());

  constexpr std::size_t kBudget = 1'000'000;
  std::size_t tried = 0;
  const auto rank = static_cast<std::size_t>(group.rank());
  for (const auto& gamma : candidates) {
    if (gamma.order() > QuotientApprox::kMaxTarget || gamma.order() < window.coords().size()) continue;
    std::vector<std::size_t> images(rank, 0);
    while (true) {
      if (++tried > kBudget) break;
      GroupHom h(group, gamma, images);
      if (separates_window(h, window)) {
        RfdCertificate c = verify_rfd(window, h, delta, jobs);
        c.candidates_tried = tried;
        return c;
      }
      // Next tuple in lexicographic order.
      std::size_t pos = rank;
      while (pos > 0 && ++images[pos - 1] == gamma.order()) images[--pos] = 0;
      if (pos == 0) break;
    }
    if (tried > kBudget) break;
  }
  RfdCertificate c;
  c.delta = delta;
  c.depth = depth;
  c.tail_bound = std::ldexp(1.0, -static_cast<int>(depth));
  c.points_checked = 0;
  c.candidates_tried = tried;
  c.reason = "no quotient separating the window within the search budget";
  return c;
}

CylinderFunction CylinderFunction::constant(double c) { return CylinderFunction{"constant", {}, {c}}; }

CylinderFunction CylinderFunction::indicator(const GroupElement& g, std::string name) {
  return CylinderFunction{std::move(name), {g}, {0.0, 1.0}};
}

namespace {

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

MeasureApprox invariant_measure_approx(const QuotientApprox& q, const std::vector<CylinderFunction>& tests,
                                       const std::vector<GroupElement>& elements) {
  const GroupSpec& G = q.window().group();
  const double size = static_cast<double>(q.size());
  for (const auto& f : tests) {
    if (f.coords.size() > 20 || f.table.size() != (std::size_t{1} << f.coords.size()))
      throw MalformedInput("cylinder function table must have 2^k entries");
    for (const auto& g : f.coords)
      if (q.window().coord_index(g) < 0)
        throw PreconditionError("test function depends on a coordinate outside the window");
  }
  auto eval = [&](const CylinderFunction& f, std::size_t z, const GroupElement& shift) {
    std::size_t key = 0;
    for (std::size_t i = 0; i < f.coords.size(); ++i)
      if (q.rho_value(z, G.multiply(shift, f.coords[i]))) key |= std::size_t{1} << i;
    return f.table[key];
  };

  MeasureApprox out;
  std::vector<double> ones(q.size(), 1.0);
  out.normalization = sorted_sum(ones) / size;
  const GroupElement e = G.identity();
  for (const auto& f : tests) {
    std::vector<double> vals(q.size());
    for (std::size_t z = 0; z < q.size(); ++z) vals[z] = eval(f, z, e);
    const double mu = sorted_sum(vals) / size;
    out.values.push_back(mu);
    if (std::all_of(f.table.begin(), f.table.end(), [](double v) { return v >= 0.0; }) && mu < 0.0) out.positive = false;

    std::map<GroupElement, double> defects;
    for (const auto& s : elements) {
      // theta_{s^-1}(y)(g) = y(s g)
      std::vector<double> moved;
      for (int z : q.domain(s)) moved.push_back(eval(f, static_cast<std::size_t>(z), s));
      std::vector<double> base;
      for (int z : q.domain(G.inverse(s))) base.push_back(eval(f, static_cast<std::size_t>(z), e));
      defects[s] = std::abs(sorted_sum(moved) / size - sorted_sum(base) / size);
    }
    out.defects.push_back(std::move(defects));
  }
  return out;
}

}  // namespace parfell
