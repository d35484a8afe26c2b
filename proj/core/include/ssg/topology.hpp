// Address arithmetic for the stretched Sierpinski gasket.
//
// The gasket is generated by three contractions G_1, G_2, G_3 with fixed
// points p_1, p_2, p_3 (an equilateral triangle of unit side centered at the
// origin) and ratio (1-alpha)/2, together with three bridge segments that
// join the images G_i(p_j) and G_j(p_i) for the bonds (1,2), (2,3), (3,1).
// Every level-m vertex is some G_w(p_i) with w a word over {1,2,3} of length
// at most m.  Because G_i fixes p_i, the representation is unique only after
// stripping the maximal trailing run of the corner letter from the word; the
// stripped form is the canonical address used everywhere in this library.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ssg {

// Error taxonomy. Every precondition failure raises Error with a code naming
// the violated constraint, so callers (and the CLI) can map failures to exit
// codes without string matching.
enum class Errc {
  bad_address,
  level_cap,
  bad_pair,
  bad_sequence,
  sequence_exhausted,
  undetermined_divergence,
  disconnected,
  bad_function,
  size_mismatch,
  bad_config,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

const char* errc_name(Errc code);

// Words are strings over the letters '1', '2', '3', outermost map first:
// the word "12" denotes the composition G_1 after G_2.
using Word = std::string;

bool is_valid_word(const Word& w);

// Refinement level ceiling. Vertex sets grow like 3^(m+1), so desk-scale use
// is capped at SSG_MAX_LEVEL (environment override), default 8. The variable
// is consulted on every call, so changing it takes effect immediately.
int max_level();
void require_level(int m);

// A vertex address: the point G_word(p_corner). Canonical iff the word does
// not end with the corner letter.
struct Address {
  Word word;
  int corner = 1;  // 1, 2 or 3

  std::string str() const;
  static Address parse(const std::string& text);

  friend bool operator==(const Address& a, const Address& b) {
    return a.corner == b.corner && a.word == b.word;
  }
  // Lexicographic on (word, corner); this is the vertex enumeration order.
  friend bool operator<(const Address& a, const Address& b) {
    if (a.word != b.word) return a.word < b.word;
    return a.corner < b.corner;
  }
};

bool is_canonical(const Address& a);
Address canonicalize(const Address& a);

// The three bonds of the generating triangle, in fixed enumeration order.
struct Bond {
  int i = 1;
  int j = 2;

  friend bool operator==(const Bond& a, const Bond& b) { return a.i == b.i && a.j == b.j; }
};

inline constexpr std::array<Bond, 3> kBonds{{{1, 2}, {2, 3}, {3, 1}}};

// Index of a bond in kBonds, or an error if (i,j) is not one of 12, 23, 31.
int bond_index(const Bond& b);

// The bridge segment of cell `cell` across bond (i,j): the line segment from
// G_cell(p_ij) to G_cell(p_ji). Its refinement level is |cell| + 1.
struct SegmentId {
  Word cell;
  Bond bond;

  int level() const { return static_cast<int>(cell.size()) + 1; }
  // Endpoint at parameter t = 0 resp. t = 1. Both are canonical as written:
  // cell + digit(i) never ends with j and vice versa.
  Address tail() const;
  Address head() const;

  std::string str() const;
  static SegmentId parse(const std::string& text);

  friend bool operator==(const SegmentId& a, const SegmentId& b) {
    return a.cell == b.cell && a.bond == b.bond;
  }
  // Enumeration order: (level, cell, bond), as produced by segments().
  friend bool operator<(const SegmentId& a, const SegmentId& b) {
    if (a.cell.size() != b.cell.size()) return a.cell.size() < b.cell.size();
    if (a.cell != b.cell) return a.cell < b.cell;
    if (a.bond.i != b.bond.i) return a.bond.i < b.bond.i;
    return a.bond.j < b.bond.j;
  }
};

// Ordered, indexable set of canonical addresses. vertex_set(m) enumerates the
// full level-m vertex set V_m in lexicographic (word, corner) order; its size
// is exactly 3^(m+1).
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Address> addrs);

  int size() const { return static_cast<int>(addrs_.size()); }
  const Address& at(int idx) const { return addrs_.at(idx); }
  const std::vector<Address>& addresses() const { return addrs_; }
  // Index of a canonical address, or -1 if absent.
  int find(const Address& a) const;
  // Index of a canonical address; throws Error(bad_address) if absent.
  int index_of(const Address& a) const;

 private:
  std::vector<Address> addrs_;
  std::unordered_map<std::string, int> index_;
};

VertexSet vertex_set(int m);

// All words of length m in lexicographic order (the level-m cells).
std::vector<Word> cells(int m);

// All bridge segments of levels 1..m: level-k segments are indexed by a
// level-(k-1) cell and a bond. Ordered by (level, cell, bond index).
std::vector<SegmentId> segments(int m);

// A symmetry of the gasket: one of the six permutations of {1,2,3}, acting on
// addresses letterwise. The action commutes with canonicalization.
struct Symmetry {
  std::array<int, 3> perm{1, 2, 3};  // perm[k-1] is the image of k

  int apply(int letter) const;
  Word apply(const Word& w) const;
  Address apply(const Address& a) const;

  Symmetry compose(const Symmetry& other) const;  // this after other
  Symmetry inverse() const;
  std::string name() const;

  static Symmetry identity();
  // The full group, identity first, rotations before reflections.
  static const std::array<Symmetry, 6>& all();

  friend bool operator==(const Symmetry& a, const Symmetry& b) { return a.perm == b.perm; }
};

// Vertices of the classical gasket at level m. Addresses (w i, j) and
// (w j, i) touch after collapsing the bridges, so a class is the set of
// padded length-m addresses of one touching point; its representative is the
// lexicographically least member. Corner points have a single member.
struct SgClass {
  int level = 0;
  Address rep;  // word padded to exactly `level` letters

  std::string str() const { return rep.str(); }

  friend bool operator==(const SgClass& a, const SgClass& b) {
    return a.level == b.level && a.rep == b.rep;
  }
  friend bool operator<(const SgClass& a, const SgClass& b) { return a.rep < b.rep; }
};

// Class of the point named by `a` in the level-m gasket. Requires the
// canonical word of `a` to have length at most m; deeper addresses name
// points interior to level-m cells and raise Error(bad_address).
SgClass sg_class(const Address& a, int m);

// The padded level-m addresses forming the class (one or two entries).
std::vector<Address> sg_class_members(const SgClass& c);

// All level-m classes in representative order; size 3 (3^m + 1) / 2.
std::vector<SgClass> sg_vertices(int m);

// Planar embedding. Corners sit on the unit-side equilateral triangle
// p_1 = (0, 1/sqrt(3)), p_2 = (-1/2, -1/(2 sqrt 3)), p_3 = (1/2, -1/(2 sqrt 3)),
// so p_1 + p_2 + p_3 = 0. G_i contracts by (1-alpha)/2 toward p_i.
struct EmbeddingParams {
  double alpha = 0.5;  // bridge length; must lie strictly between 0 and 1
};

std::array<double, 2> corner_point(int i);
std::array<double, 2> embed(const Address& a, const EmbeddingParams& params);
// Embedding of a gasket class (the alpha -> 0 collapse of the same point).
std::array<double, 2> embed_sg(const SgClass& c);

}  // namespace ssg
