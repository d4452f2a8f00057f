#include "parfell/random.hpp"

#include <algorithm>
#include <numeric>

namespace parfell {

namespace {

// Left multiplication on the cosets g<h>, each coset named by its least index.
std::vector<std::vector<int>> coset_action(const GroupSpec& G, std::size_t h, std::size_t offset) {
  const auto& table = G.table();
  std::vector<std::size_t> sub{0};
  for (std::size_t x = h; x != 0; x = table[x][h]) sub.push_back(x);
  std::vector<int> coset_of(G.order(), -1);
  int count = 0;
  for (std::size_t g = 0; g < G.order(); ++g) {
    if (coset_of[g] >= 0) continue;
    for (std::size_t s : sub) coset_of[table[g][s]] = count;
    ++count;
  }
  std::vector<int> rep(static_cast<std::size_t>(count));
  for (std::size_t g = G.order(); g-- > 0;) rep[static_cast<std::size_t>(coset_of[g])] = static_cast<int>(g);
  std::vector<std::vector<int>> act(G.order(), std::vector<int>(static_cast<std::size_t>(count)));
  for (std::size_t g = 0; g < G.order(); ++g)
    for (int c = 0; c < count; ++c)
      act[g][static_cast<std::size_t>(c)] =
          static_cast<int>(offset) + coset_of[table[g][static_cast<std::size_t>(rep[static_cast<std::size_t>(c)])]];
  return act;
}

std::size_t coset_count(const GroupSpec& G, std::size_t h) {
  std::size_t k = 1;
  for (std::size_t x = h; x != 0; x = G.table()[x][h]) ++k;
  return G.order() / k;
}

}  // namespace

FinitePartialAction random_action(const GroupSpec& group, std::size_t max_points, Rng& rng) {
  max_points = std::max<std::size_t>(max_points, 1);
  if (group.is_free()) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_points)(rng);
    std::map<GroupElement, ElementData> data;
    for (const auto& g : group.generators()) {
      std::vector<int> pts(n);
      std::iota(pts.begin(), pts.end(), 0);
      std::shuffle(pts.begin(), pts.end(), rng);
      const std::size_t k = std::uniform_int_distribution<std::size_t>(0, n)(rng);
      std::vector<int> targets = pts;
      std::shuffle(targets.begin(), targets.end(), rng);
      ElementData d{{}, PartialMap::empty(n)};
      for (std::size_t i = 0; i < k; ++i) {
        d.map.image[static_cast<std::size_t>(pts[i])] = targets[i];
        d.domain.push_back(targets[i]);
      }
      data.emplace(g, std::move(d));
    }
    return FinitePartialAction(group, n, std::move(data));
  }

  // Global action on a disjoint union of coset spaces.
  std::vector<std::vector<int>> global(group.order());
  std::size_t total = 0;
  const int parts = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int p = 0; p < parts; ++p) {
    std::size_t h = std::uniform_int_distribution<std::size_t>(0, group.order() - 1)(rng);
    if (total + coset_count(group, h) > max_points) {
      if (total > 0) break;
      // Fall back to a fixed point.
      for (auto& row : global) row.push_back(0);
      total = 1;
      break;
    }
    const auto act = coset_action(group, h, total);
    for (std::size_t g = 0; g < group.order(); ++g) global[g].insert(global[g].end(), act[g].begin(), act[g].end());
    total += act[0].size();
  }

  std::bernoulli_distribution keep(0.7);
  std::vector<int> label(total, -1);
  int n = 0;
  for (std::size_t y = 0; y < total; ++y)
    if (keep(rng)) label[y] = n++;
  if (n == 0) label[std::uniform_int_distribution<std::size_t>(0, total - 1)(rng)] = n++;

  std::map<GroupElement, ElementData> data;
  for (std::size_t g = 0; g < group.order(); ++g) {
    ElementData d{{}, PartialMap::empty(static_cast<std::size_t>(n))};
    for (std::size_t y = 0; y < total; ++y) {
      const int img = label[static_cast<std::size_t>(global[g][y])];
      if (label[y] < 0 || img < 0) continue;
      d.map.image[static_cast<std::size_t>(label[y])] = img;
      d.domain.push_back(img);
    }
    data.emplace(GroupElement::from_index(g), std::move(d));
  }
  return FinitePartialAction(group, static_cast<std::size_t>(n), std::move(data));
}

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

ComplexMatrix random_contraction(std::size_t d, Rng& rng) {
  ComplexMatrix m = random_matrix(d, d, rng);
  const double nrm = op_norm(m);
  if (nrm > 0.0) m *= 1.0 / nrm;
  return m;
}

Function random_function(const std::vector<int>& support, std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Function f(n, 0.0);
  for (int z : support) {
    const double re = u(rng);
    const double im = u(rng);
    f.at(static_cast<std::size_t>(z)) = Complex(re, im);
  }
  return f;
}

PartialRepFamily add_noise(const PartialRepFamily& v, double eps, Rng& rng) {
  PartialRepFamily out = v;
  const GroupElement e = v.group.identity();
  for (auto& [t, m] : out.v) {
    if (t == e) continue;
    m.add_scaled(eps, random_contraction(v.dim, rng));
  }
  return out;
}

}  // namespace parfell
