#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parfell {

// Signed generator index: +k is the k-th generator (1-based), -k its inverse.
using Letter = int;

/// An element of a free group (reduced word) or of a finite group (table index).
///
/// Words are ordered shortlex on letter keys +1 < -1 < +2 < -2 < ...; this is the
/// enumeration order t_0 = e, t_1, t_2, ... used by balls and Bernoulli windows.
class GroupElement {
 public:
  GroupElement() = default;

  /// Caller guarantees `reduced` has no adjacent (g, g^-1) pair.
  static GroupElement from_reduced_word(std::vector<Letter> reduced);
  static GroupElement from_index(std::size_t index);

  bool is_word() const noexcept { return !finite_; }
  const std::vector<Letter>& word() const;
  std::size_t index() const;
  std::size_t length() const noexcept { return finite_ ? 0 : word_.size(); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b);

 private:
  bool finite_ = false;
  std::vector<Letter> word_;
  std::size_t index_ = 0;
};

/// Ordering key of a single letter: +1 -> 0, -1 -> 1, +2 -> 2, -2 -> 3, ...
constexpr int letter_key(Letter l) noexcept { return 2 * ((l < 0 ? -l : l) - 1) + (l < 0 ? 1 : 0); }

/// A finitely generated free group or a finite group given by its Cayley table.
/// Cheap to copy; immutable after construction.
class GroupSpec {
 public:
  enum class Kind { Free, Finite };

  static constexpr std::size_t kDefaultMaxOrder = 512;

  static GroupSpec free(int rank);
  /// Validates the table exhaustively: identity at index 0, Latin rows and
  /// columns, associativity. Labels default to decimal indices.
  static GroupSpec finite(std::vector<std::vector<std::size_t>> table,
                          std::vector<std::string> labels = {},
                          std::size_t max_order = kDefaultMaxOrder);
  static GroupSpec cyclic(std::size_t n);
  static GroupSpec symmetric(std::size_t n);
  static GroupSpec direct_product(const GroupSpec& a, const GroupSpec& b);
  static GroupSpec trivial() { return cyclic(1); }

  Kind kind() const noexcept;
  bool is_free() const noexcept { return kind() == Kind::Free; }
  bool is_finite() const noexcept { return kind() == Kind::Finite; }
  int rank() const;
  std::size_t order() const;
  const std::vector<std::vector<std::size_t>>& table() const;
  const std::vector<std::string>& labels() const;
  std::size_t inverse_index(std::size_t i) const;

  GroupElement identity() const;
  bool is_identity(const GroupElement& g) const;
  GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
  GroupElement inverse(const GroupElement& g) const;
  /// Throws MalformedInput unless `g` is a valid element of this group.
  void check(const GroupElement& g) const;
  bool contains(const GroupElement& g) const noexcept;

  /// Free: the generator words a, b, ...; finite: every non-identity element.
  std::vector<GroupElement> generators() const;
  /// All elements of a finite group in index order.
  std::vector<GroupElement> elements() const;

  std::string format(const GroupElement& g) const;
  GroupElement parse(std::string_view text) const;
  /// Name of generator k (1-based) of a free group.
  std::string generator_name(int k) const;

  /// Short description: "free:2", "finite:6".
  std::string describe() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b);

 private:
  struct Impl;
  explicit GroupSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Freely reduces `word` in the free group of the given rank.
GroupElement reduce_word(int rank, std::span<const Letter> word);

GroupElement multiply(const GroupSpec& spec, const GroupElement& g, const GroupElement& h);

/// Elements of word length <= radius in shortlex order, identity first. For a
/// finite group (no word metric) radius 0 gives {e} and any larger radius gives
/// every element in index order.
std::vector<GroupElement> ball(const GroupSpec& spec, std::size_t radius);

/// Number of elements of the free-group ball: 1 + sum 2r(2r-1)^(k-1).
std::size_t free_ball_size(int rank, std::size_t radius);

/// Homomorphism into a finite group determined by generator images.
class GroupHom {
 public:
  /// Free source: one image per generator. Finite source: one image per
  /// element, checked to preserve every product.
  GroupHom(GroupSpec source, GroupSpec target, std::vector<std::size_t> images);

  const GroupSpec& source() const noexcept { return source_; }
  const GroupSpec& target() const noexcept { return target_; }
  const std::vector<std::size_t>& images() const noexcept { return images_; }

  std::size_t apply_index(const GroupElement& g) const;
  GroupElement apply(const GroupElement& g) const { return GroupElement::from_index(apply_index(g)); }

 private:
  GroupSpec source_;
  GroupSpec target_;
  std::vector<std::size_t> images_;
};

inline GroupElement hom_apply(const GroupHom& hom, const GroupElement& g) { return hom.apply(g); }

/// Parses "free:2", "cyclic:4", "symmetric:3", "trivial".
GroupSpec parse_group_template(std::string_view text);

}  // namespace parfell
