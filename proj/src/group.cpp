#include "parfell/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <charconv>
#include <numeric>
#include <sstream>

#include "parfell/error.hpp"

namespace parfell {

GroupElement GroupElement::from_reduced_word(std::vector<Letter> reduced) {
  GroupElement g;
  g.word_ = std::move(reduced);
  return g;
}

GroupElement GroupElement::from_index(std::size_t index) {
  GroupElement g;
  g.finite_ = true;
  g.index_ = index;
  return g;
}

const std::vector<Letter>& GroupElement::word() const {
  if (finite_) throw MalformedInput("finite group element has no word");
  return word_;
}

std::size_t GroupElement::index() const {
  if (!finite_) throw MalformedInput("free group element has no table index");
  return index_;
}

std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
  if (a.finite_ != b.finite_) return a.finite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  if (a.finite_) return a.index_ <=> b.index_;
  if (a.word_.size() != b.word_.size()) return a.word_.size() <=> b.word_.size();
  for (std::size_t i = 0; i < a.word_.size(); ++i) {
    const int ka = letter_key(a.word_[i]);
    const int kb = letter_key(b.word_[i]);
    if (ka != kb) return ka <=> kb;
  }
  return std::strong_ordering::equal;
}

struct GroupSpec::Impl {
  Kind kind = Kind::Free;
  int rank = 0;
  std::vector<std::vector<std::size_t>> table;
  std::vector<std::string> labels;
  std::vector<std::size_t> inverse;
};

namespace {

std::string cycle_label(const std::vector<std::size_t>& perm) {
  std::string out;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i] || perm[i] == i) continue;
    out += '(';
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      out += std::to_string(j + 1);
    }
    out += ')';
  }
  return out.empty() ? "e" : out;
}

bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

GroupSpec GroupSpec::free(int rank) {
  if (rank < 1) throw MalformedInput("free group rank must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Free;
  impl->rank = rank;
  return GroupSpec(std::move(impl));
}

GroupSpec GroupSpec::finite(std::vector<std::vector<std::size_t>> table, std::vector<std::string> labels,
                            std::size_t max_order) {
  const std::size_t n = table.size();
  if (n == 0) throw MalformedInput("finite group table is empty");
  if (n > max_order) throw MalformedInput("finite group order " + std::to_string(n) + " exceeds cap " + std::to_string(max_order));
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw MalformedInput("group table row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < n; ++j)
      if (table[i][j] >= n) throw MalformedInput("group table entry out of range");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (table[0][i] != i || table[i][0] != i) throw MalformedInput("index 0 is not the identity of the table");

  std::vector<std::size_t> inverse(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> row(n, false), col(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      row[table[i][j]] = true;
      col[table[j][i]] = true;
      if (table[i][j] == 0) inverse[i] = j;
    }
    if (!std::all_of(row.begin(), row.end(), [](bool b) { return b; }) ||
        !std::all_of(col.begin(), col.end(), [](bool b) { return b; }))
      throw MalformedInput("group table is not a Latin square");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t ij = table[i][j];
      for (std::size_t k = 0; k < n; ++k)
        if (table[ij][k] != table[i][table[j][k]])
          throw MalformedInput("group table is not associative at (" + std::to_string(i) + "," + std::to_string(j) +
                               "," + std::to_string(k) + ")");
    }

  if (labels.empty()) {
    labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  }
  if (labels.size() != n) throw MalformedInput("label count does not match group order");
  {
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw MalformedInput("duplicate group labels");
  }

  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Finite;
  impl->table = std::move(table);
  impl->labels = std::move(labels);
  impl->inverse = std::move(inverse);
  return GroupSpec(std::move(impl));
}

GroupSpec GroupSpec::cyclic(std::size_t n) {
  if (n == 0) throw MalformedInput("cyclic group order must be >= 1");
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  return finite(std::move(table));
}

GroupSpec GroupSpec::symmetric(std::size_t n) {
  if (n == 0 || n > 5) throw MalformedInput("symmetric group template supports 1 <= n <= 5");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  const std::size_t m = perms.size();
  auto index_of = [&](const std::vector<std::size_t>& q) {
    return static_cast<std::size_t>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<std::size_t>> table(m, std::vector<std::size_t>(m));
  std::vector<std::size_t> comp(n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      // (g h)(k) = g(h(k)): h acts first.
      for (std::size_t k = 0; k < n; ++k) comp[k] = perms[i][perms[j][k]];
      table[i][j] = index_of(comp);
    }
  std::vector<std::string> labels;
  for (const auto& q : perms) labels.push_back(cycle_label(q));
  return finite(std::move(table), std::move(labels));
}

GroupSpec GroupSpec::direct_product(const GroupSpec& a, const GroupSpec& b) {
  if (!a.is_finite() || !b.is_finite()) throw MalformedInput("direct product needs finite factors");
  const std::size_t na = a.order(), nb = b.order();
  std::vector<std::vector<std::size_t>> table(na * nb, std::vector<std::size_t>(na * nb));
  std::vector<std::string> labels(na * nb);
  for (std::size_t i = 0; i < na * nb; ++i) {
    labels[i] = "(" + a.labels()[i / nb] + "," + b.labels()[i % nb] + ")";
    for (std::size_t j = 0; j < na * nb; ++j)
      table[i][j] = a.table()[i / nb][j / nb] * nb + b.table()[i % nb][j % nb];
  }
  return finite(std::move(table), std::move(labels));
}

GroupSpec::Kind GroupSpec::kind() const noexcept { return impl_->kind; }

int GroupSpec::rank() const {
  if (!is_free()) throw MalformedInput("finite group has no free rank");
  return impl_->rank;
}

std::size_t GroupSpec::order() const {
  if (!is_finite()) throw MalformedInput("free group has no finite order");
  return impl_->table.size();
}

const std::vector<std::vector<std::size_t>>& GroupSpec::table() const {
  if (!is_finite()) throw MalformedInput("free group has no table");
  return impl_->table;
}

const std::vector<std::string>& GroupSpec::labels() const {
  if (!is_finite()) throw MalformedInput("free group has no labels");
  return impl_->labels;
}

std::size_t GroupSpec::inverse_index(std::size_t i) const { return impl_->inverse.at(i); }

GroupElement GroupSpec::identity() const {
  return is_free() ? GroupElement{} : GroupElement::from_index(0);
}

bool GroupSpec::is_identity(const GroupElement& g) const {
  return is_free() ? (g.is_word() && g.word().empty()) : (!g.is_word() && g.index() == 0);
}

bool GroupSpec::contains(const GroupElement& g) const noexcept {
  if (is_free()) {
    if (!g.is_word()) return false;
    const auto& w = g.word();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0 || std::abs(w[i]) > impl_->rank) return false;
      if (i > 0 && w[i] == -w[i - 1]) return false;
    }
    return true;
  }
  return !g.is_word() && g.index() < impl_->table.size();
}

void GroupSpec::check(const GroupElement& g) const {
  if (!contains(g)) throw MalformedInput("element does not belong to group " + describe());
}

GroupElement GroupSpec::multiply(const GroupElement& g, const GroupElement& h) const {
  check(g);
  check(h);
  if (is_finite()) return GroupElement::from_index(impl_->table[g.index()][h.index()]);
  std::vector<Letter> out = g.word();
  for (Letter l : h.word()) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return GroupElement::from_reduced_word(std::move(out));
}

GroupElement GroupSpec::inverse(const GroupElement& g) const {
  check(g);
  if (is_finite()) return GroupElement::from_index(impl_->inverse[g.index()]);
  std::vector<Letter> out(g.word().rbegin(), g.word().rend());
  for (auto& l : out) l = -l;
  return GroupElement::from_reduced_word(std::move(out));
}

std::vector<GroupElement> GroupSpec::generators() const {
  std::vector<GroupElement> out;
  if (is_free()) {
    for (int k = 1; k <= impl_->rank; ++k) out.push_back(GroupElement::from_reduced_word({k}));
  } else {
    for (std::size_t i = 1; i < impl_->table.size(); ++i) out.push_back(GroupElement::from_index(i));
  }
  return out;
}

std::vector<GroupElement> GroupSpec::elements() const {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < order(); ++i) out.push_back(GroupElement::from_index(i));
  return out;
}

std::string GroupSpec::generator_name(int k) const {
  if (k < 1 || k > rank()) throw MalformedInput("generator index out of range");
  if (rank() <= 4) return std::string(1, static_cast<char>('a' + k - 1));
  return "x" + std::to_string(k);
}

std::string GroupSpec::format(const GroupElement& g) const {
  check(g);
  if (is_finite()) return impl_->labels[g.index()];
  const auto& w = g.word();
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += generator_name(std::abs(w[i]));
    if (w[i] < 0) out += "^-1";
  }
  return out;
}

GroupElement GroupSpec::parse(std::string_view text) const {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (is_finite()) {
    const auto& labels = impl_->labels;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == text) return GroupElement::from_index(i);
    if (text == "e") return identity();
    long long v = 0;
    if (parse_int(text, v) && v >= 0 && static_cast<std::size_t>(v) < labels.size())
      return GroupElement::from_index(static_cast<std::size_t>(v));
    throw MalformedInput("unknown element '" + std::string(text) + "' of " + describe());
  }
  if (text.empty() || text == "e") return identity();
  std::vector<Letter> letters;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    std::string_view tok = token;
    long long exponent = 1;
    if (auto caret = tok.find('^'); caret != std::string_view::npos) {
      if (!parse_int(tok.substr(caret + 1), exponent)) throw MalformedInput("bad exponent in '" + token + "'");
      tok = tok.substr(0, caret);
    }
    int gen = 0;
    for (int k = 1; k <= impl_->rank; ++k)
      if (generator_name(k) == tok) gen = k;
    if (gen == 0) {
      long long v = 0;
      if (tok.size() > 1 && tok[0] == 'x' && parse_int(tok.substr(1), v) && v >= 1 && v <= impl_->rank)
        gen = static_cast<int>(v);
    }
    if (gen == 0) throw MalformedInput("unknown generator '" + std::string(tok) + "' in free group of rank " + std::to_string(impl_->rank));
    const Letter l = exponent < 0 ? -gen : gen;
    for (long long i = 0; i < std::llabs(exponent); ++i) letters.push_back(l);
  }
  return reduce_word(impl_->rank, letters);
}

std::string GroupSpec::describe() const {
  if (is_free()) return "free:" + std::to_string(impl_->rank);
  return "finite:" + std::to_string(impl_->table.size());
}

bool operator==(const GroupSpec& a, const GroupSpec& b) {
  if (a.impl_ == b.impl_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.is_free()) return a.impl_->rank == b.impl_->rank;
  return a.impl_->table == b.impl_->table;
}

GroupElement reduce_word(int rank, std::span<const Letter> word) {
  std::vector<Letter> stack;
  for (Letter l : word) {
    if (l == 0 || std::abs(l) > rank)
      throw MalformedInput("generator index " + std::to_string(l) + " out of range for rank " + std::to_string(rank));
    if (!stack.empty() && stack.back() == -l)
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return GroupElement::from_reduced_word(std::move(stack));
}

GroupElement multiply(const GroupSpec& spec, const GroupElement& g, const GroupElement& h) {
  return spec.multiply(g, h);
}

std::vector<GroupElement> ball(const GroupSpec& spec, std::size_t radius) {
  if (spec.is_finite()) {
    if (radius == 0) return {spec.identity()};
    return spec.elements();
  }
  const int r = spec.rank();
  std::vector<Letter> alphabet;
  for (int k = 1; k <= r; ++k) {
    alphabet.push_back(k);
    alphabet.push_back(-k);
  }
  std::vector<GroupElement> out{spec.identity()};
  std::vector<std::vector<Letter>> level{{}};
  for (std::size_t len = 1; len <= radius; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : level)
      for (Letter l : alphabet) {
        if (!w.empty() && w.back() == -l) continue;
        auto ext = w;
        ext.push_back(l);
        next.push_back(std::move(ext));
      }
    for (const auto& w : next) out.push_back(GroupElement::from_reduced_word(w));
    level = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t free_ball_size(int rank, std::size_t radius) {
  std::size_t total = 1, sphere = 2 * static_cast<std::size_t>(rank);
  for (std::size_t k = 1; k <= radius; ++k) {
    total += sphere;
    sphere *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

GroupHom::GroupHom(GroupSpec source, GroupSpec target, std::vector<std::size_t> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (!target_.is_finite()) throw MalformedInput("homomorphism target must be a finite group");
  for (auto i : images_)
    if (i >= target_.order()) throw MalformedInput("homomorphism image out of range");
  if (source_.is_free()) {
    if (images_.size() != static_cast<std::size_t>(source_.rank()))
      throw MalformedInput("free-source homomorphism needs one image per generator");
    return;
  }
  const std::size_t n = source_.order();
  if (images_.size() != n) throw MalformedInput("finite-source homomorphism needs one image per element");
  const auto& st = source_.table();
  const auto& tt = target_.table();
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h)
      if (images_[st[g][h]] != tt[images_[g]][images_[h]])
        throw MalformedInput("images do not define a homomorphism (product " + std::to_string(g) + "*" +
                             std::to_string(h) + " not preserved)");
}

std::size_t GroupHom::apply_index(const GroupElement& g) const {
  source_.check(g);
  if (source_.is_finite()) return images_[g.index()];
  std::size_t acc = 0;
  const auto& tt = target_.table();
  for (Letter l : g.word()) {
    const std::size_t img = images_[static_cast<std::size_t>(std::abs(l) - 1)];
    acc = tt[acc][l > 0 ? img : target_.inverse_index(img)];
  }
  return acc;
}

GroupSpec parse_group_template(std::string_view text) {
  auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  long long arg = 0;
  const bool has_arg = colon != std::string_view::npos && parse_int(text.substr(colon + 1), arg);
  if (name == "trivial") return GroupSpec::trivial();
  if (!has_arg || arg < 1) throw MalformedInput("bad group template '" + std::string(text) + "'");
  if (name == "free") return GroupSpec::free(static_cast<int>(arg));
  if (name == "cyclic") return GroupSpec::cyclic(static_cast<std::size_t>(arg));
  if (name == "symmetric") return GroupSpec::symmetric(static_cast<std::size_t>(arg));
  throw MalformedInput("unknown group template '" + std::string(name) + "'");
}

}  // namespace parfell
