#include "ssg/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace ssg {

namespace {

char digit_of(int letter) { return static_cast<char>('0' + letter); }

int letter_of(char c) { return c - '0'; }

bool is_letter(char c) { return c == '1' || c == '2' || c == '3'; }

int parsed_max_level() {
  const char* env = std::getenv("SSG_MAX_LEVEL");
  if (env == nullptr || *env == '\0') return 8;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 0 || v > 16) {
    throw Error(Errc::bad_config, "SSG_MAX_LEVEL must be an integer in [0, 16]");
  }
  return static_cast<int>(v);
}

}  // namespace

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::bad_address: return "bad_address";
    case Errc::level_cap: return "level_cap";
    case Errc::bad_pair: return "bad_pair";
    case Errc::bad_sequence: return "bad_sequence";
    case Errc::sequence_exhausted: return "sequence_exhausted";
    case Errc::undetermined_divergence: return "undetermined_divergence";
    case Errc::disconnected: return "disconnected";
    case Errc::bad_function: return "bad_function";
    case Errc::size_mismatch: return "size_mismatch";
    case Errc::bad_config: return "bad_config";
  }
  return "unknown";
}

bool is_valid_word(const Word& w) {
  return std::all_of(w.begin(), w.end(), is_letter);
}

int max_level() { return parsed_max_level(); }

void require_level(int m) {
  if (m < 0) throw Error(Errc::level_cap, "level must be non-negative");
  if (m > max_level()) {
    throw Error(Errc::level_cap, "level " + std::to_string(m) + " exceeds cap " +
                                     std::to_string(max_level()) +
                                     " (set SSG_MAX_LEVEL to raise)");
  }
}

std::string Address::str() const {
  return word + ":" + digit_of(corner);
}

Address Address::parse(const std::string& text) {
  auto pos = text.rfind(':');
  if (pos == std::string::npos) {
    throw Error(Errc::bad_address, "address must look like \"word:corner\", got \"" + text + "\"");
  }
  std::string word_part = text.substr(0, pos);
  std::string corner_part = text.substr(pos + 1);
  if (word_part == "∅") word_part.clear();  // accept the empty-word glyph
  if (!is_valid_word(word_part)) {
    throw Error(Errc::bad_address, "address word may only contain 1, 2, 3: \"" + text + "\"");
  }
  if (corner_part.size() != 1 || !is_letter(corner_part[0])) {
    throw Error(Errc::bad_address, "address corner must be 1, 2 or 3: \"" + text + "\"");
  }
  return Address{word_part, letter_of(corner_part[0])};
}

static void require_address(const Address& a) {
  if (a.corner < 1 || a.corner > 3 || !is_valid_word(a.word)) {
    throw Error(Errc::bad_address, "malformed address \"" + a.word + ":" +
                                       std::to_string(a.corner) + "\"");
  }
}

bool is_canonical(const Address& a) {
  require_address(a);
  return a.word.empty() || a.word.back() != digit_of(a.corner);
}

Address canonicalize(const Address& a) {
  require_address(a);
  Address out = a;
  while (!out.word.empty() && out.word.back() == digit_of(out.corner)) {
    out.word.pop_back();
  }
  return out;
}

int bond_index(const Bond& b) {
  for (int k = 0; k < 3; ++k) {
    if (kBonds[k] == b) return k;
  }
  throw Error(Errc::bad_address, "bond must be one of 12, 23, 31");
}

Address SegmentId::tail() const {
  return Address{cell + digit_of(bond.i), bond.j};
}

Address SegmentId::head() const {
  return Address{cell + digit_of(bond.j), bond.i};
}

std::string SegmentId::str() const {
  return cell + ":" + digit_of(bond.i) + digit_of(bond.j);
}

SegmentId SegmentId::parse(const std::string& text) {
  auto pos = text.rfind(':');
  if (pos == std::string::npos) {
    throw Error(Errc::bad_address, "segment must look like \"cell:ij\", got \"" + text + "\"");
  }
  std::string cell = text.substr(0, pos);
  std::string bond_part = text.substr(pos + 1);
  if (cell == "∅") cell.clear();
  if (!is_valid_word(cell)) {
    throw Error(Errc::bad_address, "segment cell may only contain 1, 2, 3: \"" + text + "\"");
  }
  if (bond_part.size() != 2 || !is_letter(bond_part[0]) || !is_letter(bond_part[1])) {
    throw Error(Errc::bad_address, "segment bond must be two letters: \"" + text + "\"");
  }
  SegmentId seg{cell, Bond{letter_of(bond_part[0]), letter_of(bond_part[1])}};
  bond_index(seg.bond);  // only the canonical orientations name a segment
  return seg;
}

VertexSet::VertexSet(std::vector<Address> addrs) : addrs_(std::move(addrs)) {
  index_.reserve(addrs_.size());
  for (int k = 0; k < static_cast<int>(addrs_.size()); ++k) {
    if (!is_canonical(addrs_[k])) {
      throw Error(Errc::bad_address, "vertex set requires canonical addresses");
    }
    if (!index_.emplace(addrs_[k].str(), k).second) {
      throw Error(Errc::bad_address, "duplicate address " + addrs_[k].str());
    }
  }
}

int VertexSet::find(const Address& a) const {
  auto it = index_.find(a.str());
  return it == index_.end() ? -1 : it->second;
}

int VertexSet::index_of(const Address& a) const {
  int idx = find(a);
  if (idx < 0) throw Error(Errc::bad_address, "address " + a.str() + " not in vertex set");
  return idx;
}

std::vector<Word> cells(int m) {
  require_level(m);
  std::vector<Word> words{Word{}};
  for (int k = 0; k < m; ++k) {
    std::vector<Word> next;
    next.reserve(words.size() * 3);
    for (const Word& w : words) {
      for (int letter = 1; letter <= 3; ++letter) next.push_back(w + digit_of(letter));
    }
    words = std::move(next);
  }
  return words;  // built in lexicographic order
}

VertexSet vertex_set(int m) {
  require_level(m);
  // Canonical addresses with words of length up to m: for each length the
  // word must not end with the corner letter, which leaves 2 * 3^(k-1)
  // choices per corner at length k >= 1 and totals 3^(m+1).
  std::vector<Address> addrs;
  for (int k = 0; k <= m; ++k) {
    for (const Word& w : cells(k)) {
      if (static_cast<int>(w.size()) != k) continue;
      for (int corner = 1; corner <= 3; ++corner) {
        Address a{w, corner};
        if (is_canonical(a)) addrs.push_back(std::move(a));
      }
    }
  }
  std::sort(addrs.begin(), addrs.end());
  return VertexSet(std::move(addrs));
}

std::vector<SegmentId> segments(int m) {
  require_level(m);
  std::vector<SegmentId> out;
  for (int level = 1; level <= m; ++level) {
    for (const Word& w : cells(level - 1)) {
      for (const Bond& b : kBonds) out.push_back(SegmentId{w, b});
    }
  }
  return out;
}

int Symmetry::apply(int letter) const {
  if (letter < 1 || letter > 3) throw Error(Errc::bad_address, "letter out of range");
  return perm[letter - 1];
}

Word Symmetry::apply(const Word& w) const {
  Word out;
  out.reserve(w.size());
  for (char c : w) out.push_back(digit_of(apply(letter_of(c))));
  return out;
}

Address Symmetry::apply(const Address& a) const {
  // A canonical address stays canonical: the permutation preserves the
  // "last letter differs from corner" property. Canonicalize anyway so the
  // action is total on raw addresses.
  return canonicalize(Address{apply(a.word), apply(a.corner)});
}

Symmetry Symmetry::compose(const Symmetry& other) const {
  Symmetry out;
  for (int k = 1; k <= 3; ++k) out.perm[k - 1] = apply(other.apply(k));
  return out;
}

Symmetry Symmetry::inverse() const {
  Symmetry out;
  for (int k = 1; k <= 3; ++k) out.perm[apply(k) - 1] = k;
  return out;
}

std::string Symmetry::name() const {
  if (perm == std::array<int, 3>{1, 2, 3}) return "id";
  if (perm == std::array<int, 3>{2, 3, 1}) return "rot123";
  if (perm == std::array<int, 3>{3, 1, 2}) return "rot132";
  if (perm == std::array<int, 3>{2, 1, 3}) return "swap12";
  if (perm == std::array<int, 3>{1, 3, 2}) return "swap23";
  return "swap13";
}

Symmetry Symmetry::identity() { return Symmetry{}; }

const std::array<Symmetry, 6>& Symmetry::all() {
  static const std::array<Symmetry, 6> group{{
      Symmetry{{1, 2, 3}},
      Symmetry{{2, 3, 1}},
      Symmetry{{3, 1, 2}},
      Symmetry{{2, 1, 3}},
      Symmetry{{1, 3, 2}},
      Symmetry{{3, 2, 1}},
  }};
  return group;
}

SgClass sg_class(const Address& a, int m) {
  require_level(m);
  Address c = canonicalize(a);
  int k = static_cast<int>(c.word.size());
  if (k > m) {
    throw Error(Errc::bad_address, "address " + c.str() + " is deeper than level " +
                                       std::to_string(m) + "; its class is not a level-" +
                                       std::to_string(m) + " gasket vertex");
  }
  Address padded{c.word + Word(m - k, digit_of(c.corner)), c.corner};
  if (k == 0) return SgClass{m, padded};
  // The touching partner: swap the last stem letter with the corner. With
  // c = (w i, j), the same collapsed point is also (w j, i) padded with i.
  int i = letter_of(c.word.back());
  Word stem = c.word.substr(0, k - 1);
  Address partner{stem + digit_of(c.corner) + Word(m - k, digit_of(i)), i};
  return SgClass{m, std::min(padded, partner)};
}

std::vector<Address> sg_class_members(const SgClass& c) {
  Address canon = canonicalize(c.rep);
  if (canon.word.empty()) return {c.rep};
  int i = letter_of(canon.word.back());
  Word stem = canon.word.substr(0, canon.word.size() - 1);
  int pad = c.level - static_cast<int>(canon.word.size());
  Address partner{stem + digit_of(canon.corner) + Word(pad, digit_of(i)), i};
  Address padded{canon.word + Word(pad, digit_of(canon.corner)), canon.corner};
  if (partner < padded) std::swap(padded, partner);
  return {padded, partner};
}

std::vector<SgClass> sg_vertices(int m) {
  require_level(m);
  std::vector<SgClass> out;
  for (const Word& w : cells(m)) {
    for (int corner = 1; corner <= 3; ++corner) {
      SgClass c = sg_class(Address{w, corner}, m);
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::array<double, 2> corner_point(int i) {
  static const double s3 = std::sqrt(3.0);
  switch (i) {
    case 1: return {0.0, 1.0 / s3};
    case 2: return {-0.5, -0.5 / s3};
    case 3: return {0.5, -0.5 / s3};
    default: throw Error(Errc::bad_address, "corner must be 1, 2 or 3");
  }
}

static std::array<double, 2> apply_maps(const Word& w, std::array<double, 2> x, double ratio) {
  // G_w = G_{w_1} o ... o G_{w_k}; apply the innermost (last) letter first.
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    auto p = corner_point(letter_of(*it));
    x[0] = ratio * (x[0] - p[0]) + p[0];
    x[1] = ratio * (x[1] - p[1]) + p[1];
  }
  return x;
}

std::array<double, 2> embed(const Address& a, const EmbeddingParams& params) {
  require_address(a);
  if (!(params.alpha > 0.0) || !(params.alpha < 1.0)) {
    throw Error(Errc::bad_config, "embedding alpha must lie strictly between 0 and 1");
  }
  return apply_maps(a.word, corner_point(a.corner), (1.0 - params.alpha) / 2.0);
}

std::array<double, 2> embed_sg(const SgClass& c) {
  return apply_maps(c.rep.word, corner_point(c.rep.corner), 0.5);
}

}  // namespace ssg
