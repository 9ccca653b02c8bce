// Copyright 2026 The Sift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sift/regex.h"

#include <algorithm>
#include <utility>

#include "sift/text.h"

namespace sift {
namespace {

constexpr char32_t kMaxCodepoint = 0x10FFFF;
constexpr int kMaxRepeat = 1000;
constexpr size_t kMaxProgramSize = 10000;

using Ranges = std::vector<std::pair<char32_t, char32_t>>;

Ranges normalize(Ranges r) {
  std::sort(r.begin(), r.end());
  Ranges out;
  for (const auto& [lo, hi] : r) {
    if (!out.empty() && lo <= out.back().second + 1) {
      out.back().second = std::max(out.back().second, hi);
    } else {
      out.emplace_back(lo, hi);
    }
  }
  return out;
}

Ranges complement(const Ranges& r) {
  Ranges n = normalize(r);
  Ranges out;
  char32_t next = 0;
  for (const auto& [lo, hi] : n) {
    if (lo > next) out.emplace_back(next, lo - 1);
    next = hi + 1;
  }
  if (next <= kMaxCodepoint) out.emplace_back(next, kMaxCodepoint);
  return out;
}

Ranges digit_ranges() { return {{U'0', U'9'}}; }
Ranges word_ranges() { return {{U'0', U'9'}, {U'A', U'Z'}, {U'_', U'_'}, {U'a', U'z'}}; }
Ranges space_ranges() {
  return {{0x09, 0x0D}, {0x20, 0x20}, {0x85, 0x85}, {0xA0, 0xA0},
          {0x1680, 0x1680}, {0x2000, 0x200A}, {0x2028, 0x2029},
          {0x202F, 0x202F}, {0x205F, 0x205F}, {0x3000, 0x3000}};
}

bool is_word(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'A' && c <= U'Z') ||
         (c >= U'a' && c <= U'z') || c == U'_';
}

struct Node {
  enum class Kind { kEmpty, kChar, kAny, kClass, kConcat, kAlternate, kRepeat,
                    kGroup, kLineStart, kLineEnd, kWordBoundary,
                    kNotWordBoundary };
  Kind kind = Kind::kEmpty;
  char32_t ch = 0;
  Ranges ranges;
  std::vector<Node> children;
  int min = 0;
  int max = -1;  // -1 is unbounded
  bool greedy = true;
  int group = -1;  // -1 for non-capturing
};

class Parser {
 public:
  explicit Parser(std::u32string pattern) : p_(std::move(pattern)) {}

  Node parse() {
    Node n = parse_alternation();
    if (pos_ < p_.size()) fail("unmatched ')'");
    return n;
  }

  int group_count() const { return groups_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw RegexError(pos_, msg); }

  bool at_end() const { return pos_ >= p_.size(); }
  char32_t peek() const { return p_[pos_]; }

  Node parse_alternation() {
    std::vector<Node> branches;
    branches.push_back(parse_concat());
    while (!at_end() && peek() == U'|') {
      ++pos_;
      branches.push_back(parse_concat());
    }
    if (branches.size() == 1) return std::move(branches.front());
    Node n;
    n.kind = Node::Kind::kAlternate;
    n.children = std::move(branches);
    return n;
  }

  Node parse_concat() {
    Node n;
    n.kind = Node::Kind::kConcat;
    while (!at_end() && peek() != U'|' && peek() != U')') {
      n.children.push_back(parse_repeat());
    }
    return n;
  }

  bool parse_counted(int& min, int& max) {
    // On entry p_[pos_] == '{'. Leaves pos_ untouched when the brace is not a
    // quantifier so it can be read as a literal.
    size_t i = pos_ + 1;
    auto read_int = [&](int& out) {
      size_t start = i;
      long v = 0;
      while (i < p_.size() && p_[i] >= U'0' && p_[i] <= U'9') {
        v = v * 10 + (p_[i] - U'0');
        if (v > kMaxRepeat) v = kMaxRepeat + 1;
        ++i;
      }
      out = static_cast<int>(v);
      return i > start;
    };
    int lo = 0;
    int hi = 0;
    if (!read_int(lo)) return false;
    if (i < p_.size() && p_[i] == U'}') {
      hi = lo;
    } else if (i < p_.size() && p_[i] == U',') {
      ++i;
      if (i < p_.size() && p_[i] == U'}') {
        hi = -1;
      } else if (!read_int(hi) || i >= p_.size() || p_[i] != U'}') {
        return false;
      }
    } else {
      return false;
    }
    if (lo > kMaxRepeat || hi > kMaxRepeat) fail("repetition count too large");
    if (hi != -1 && hi < lo) fail("repetition range out of order");
    pos_ = i + 1;
    min = lo;
    max = hi;
    return true;
  }

  Node parse_repeat() {
    Node atom = parse_atom();
    bool quantified = false;
    while (!at_end()) {
      int min = 0;
      int max = -1;
      char32_t c = peek();
      if (c == U'*') {
        ++pos_;
      } else if (c == U'+') {
        ++pos_;
        min = 1;
      } else if (c == U'?') {
        ++pos_;
        max = 1;
      } else if (c == U'{' && parse_counted(min, max)) {
        // consumed
      } else {
        break;
      }
      if (quantified) fail("nested quantifier");
      if (atom.kind == Node::Kind::kLineStart || atom.kind == Node::Kind::kLineEnd ||
          atom.kind == Node::Kind::kWordBoundary ||
          atom.kind == Node::Kind::kNotWordBoundary) {
        fail("nothing to repeat");
      }
      quantified = true;
      bool greedy = true;
      if (!at_end() && peek() == U'?') {
        ++pos_;
        greedy = false;
      } else if (!at_end() && peek() == U'+') {
        fail("possessive quantifiers are not supported");
      }
      Node r;
      r.kind = Node::Kind::kRepeat;
      r.min = min;
      r.max = max;
      r.greedy = greedy;
      r.children.push_back(std::move(atom));
      atom = std::move(r);
    }
    return atom;
  }

  Node parse_atom() {
    char32_t c = peek();
    Node n;
    switch (c) {
      case U'(': {
        ++pos_;
        int group = -1;
        if (!at_end() && peek() == U'?') {
          if (pos_ + 1 < p_.size() && p_[pos_ + 1] == U':') {
            pos_ += 2;
          } else {
            fail("unsupported group construct");
          }
        } else {
          group = ++groups_;
        }
        Node inner = parse_alternation();
        if (at_end() || peek() != U')') fail("missing ')'");
        ++pos_;
        n.kind = Node::Kind::kGroup;
        n.group = group;
        n.children.push_back(std::move(inner));
        return n;
      }
      case U'[':
        ++pos_;
        n.kind = Node::Kind::kClass;
        n.ranges = parse_class();
        return n;
      case U'.':
        ++pos_;
        n.kind = Node::Kind::kAny;
        return n;
      case U'^':
        ++pos_;
        n.kind = Node::Kind::kLineStart;
        return n;
      case U'$':
        ++pos_;
        n.kind = Node::Kind::kLineEnd;
        return n;
      case U'*':
      case U'+':
      case U'?':
        fail("nothing to repeat");
      case U'\\':
        return parse_escape();
      default:
        ++pos_;
        n.kind = Node::Kind::kChar;
        n.ch = c;
        return n;
    }
  }

  int hex_value(char32_t c) const {
    if (c >= U'0' && c <= U'9') return static_cast<int>(c - U'0');
    if (c >= U'a' && c <= U'f') return static_cast<int>(c - U'a' + 10);
    if (c >= U'A' && c <= U'F') return static_cast<int>(c - U'A' + 10);
    return -1;
  }

  char32_t read_hex(size_t digits) {
    char32_t v = 0;
    for (size_t k = 0; k < digits; ++k) {
      if (at_end() || hex_value(peek()) < 0) fail("bad hex escape");
      v = v * 16 + static_cast<char32_t>(hex_value(peek()));
      ++pos_;
    }
    return v;
  }

  // Reads the escape after a backslash. Returns either a single codepoint or
  // a class (ranges) through the out-parameters.
  // kind: 0 = codepoint, 1 = class, 2 = \b, 3 = \B
  int read_escape(char32_t& cp, Ranges& ranges) {
    ++pos_;  // backslash
    if (at_end()) fail("trailing backslash");
    char32_t c = peek();
    ++pos_;
    switch (c) {
      case U'd': ranges = digit_ranges(); return 1;
      case U'D': ranges = complement(digit_ranges()); return 1;
      case U'w': ranges = word_ranges(); return 1;
      case U'W': ranges = complement(word_ranges()); return 1;
      case U's': ranges = space_ranges(); return 1;
      case U'S': ranges = complement(space_ranges()); return 1;
      case U'b': return 2;
      case U'B': return 3;
      case U'n': cp = U'\n'; return 0;
      case U'r': cp = U'\r'; return 0;
      case U't': cp = U'\t'; return 0;
      case U'f': cp = U'\f'; return 0;
      case U'v': cp = U'\v'; return 0;
      case U'0': cp = 0; return 0;
      case U'x':
        if (!at_end() && peek() == U'{') {
          ++pos_;
          char32_t v = 0;
          size_t n = 0;
          while (!at_end() && hex_value(peek()) >= 0) {
            v = v * 16 + static_cast<char32_t>(hex_value(peek()));
            ++pos_;
            if (++n > 6) fail("bad hex escape");
          }
          if (n == 0 || at_end() || peek() != U'}' || v > kMaxCodepoint) {
            fail("bad hex escape");
          }
          ++pos_;
          cp = v;
          return 0;
        }
        cp = read_hex(2);
        return 0;
      case U'u':
        cp = read_hex(4);
        return 0;
      default:
        break;
    }
    if (c >= U'1' && c <= U'9') fail("backreferences are not supported");
    if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) {
      fail("unknown escape");
    }
    cp = c;
    return 0;
  }

  Node parse_escape() {
    char32_t cp = 0;
    Ranges ranges;
    Node n;
    switch (read_escape(cp, ranges)) {
      case 0:
        n.kind = Node::Kind::kChar;
        n.ch = cp;
        break;
      case 1:
        n.kind = Node::Kind::kClass;
        n.ranges = normalize(std::move(ranges));
        break;
      case 2:
        n.kind = Node::Kind::kWordBoundary;
        break;
      default:
        n.kind = Node::Kind::kNotWordBoundary;
        break;
    }
    return n;
  }

  Ranges parse_class() {
    bool negated = false;
    if (!at_end() && peek() == U'^') {
      negated = true;
      ++pos_;
    }
    Ranges ranges;
    bool first = true;
    while (true) {
      if (at_end()) fail("missing ']'");
      char32_t c = peek();
      if (c == U']' && !first) {
        ++pos_;
        break;
      }
      first = false;
      if (c == U'[' && pos_ + 1 < p_.size() &&
          (p_[pos_ + 1] == U':' || p_[pos_ + 1] == U'=' || p_[pos_ + 1] == U'.')) {
        fail("POSIX classes are not supported");
      }
      char32_t lo = 0;
      if (!read_class_atom(lo, ranges)) continue;  // class escape merged
      if (pos_ + 1 < p_.size() && peek() == U'-' && p_[pos_ + 1] != U']') {
        size_t save = pos_;
        ++pos_;
        char32_t hi = 0;
        Ranges dummy;
        if (!read_class_atom(hi, dummy)) {
          // "a-\d": the hyphen is a literal and the escape a class.
          ranges.emplace_back(lo, lo);
          ranges.emplace_back(U'-', U'-');
          ranges.insert(ranges.end(), dummy.begin(), dummy.end());
          continue;
        }
        if (hi < lo) {
          pos_ = save;
          fail("class range out of order");
        }
        ranges.emplace_back(lo, hi);
      } else {
        ranges.emplace_back(lo, lo);
      }
    }
    ranges = normalize(std::move(ranges));
    return negated ? complement(ranges) : ranges;
  }

  // Returns false when the atom was a class escape whose ranges were appended.
  bool read_class_atom(char32_t& cp, Ranges& ranges) {
    if (peek() != U'\\') {
      cp = peek();
      ++pos_;
      return true;
    }
    Ranges cls;
    int kind = read_escape(cp, cls);
    if (kind == 2) {
      cp = U'\b';
      return true;
    }
    if (kind == 3) fail("\\B inside a class");
    if (kind == 1) {
      ranges.insert(ranges.end(), cls.begin(), cls.end());
      return false;
    }
    return true;
  }

  std::u32string p_;
  size_t pos_ = 0;
  int groups_ = 0;
};

enum class Op { kChar, kAny, kClass, kMatch, kJmp, kSplit, kSave, kLineStart,
                kLineEnd, kWordBoundary, kNotWordBoundary };

struct Inst {
  Op op;
  char32_t ch = 0;
  int x = 0;  // jump target / class index / save slot
  int y = 0;  // second split target
};

}  // namespace

struct Regex::Program {
  std::vector<Inst> insts;
  std::vector<Ranges> classes;
  int groups = 0;
};

namespace {

class Compiler {
 public:
  explicit Compiler(Regex::Program& prog) : prog_(prog) {}

  void emit(const Node& n) {
    if (prog_.insts.size() > kMaxProgramSize) {
      throw RegexError(0, "pattern too large");
    }
    switch (n.kind) {
      case Node::Kind::kEmpty:
        break;
      case Node::Kind::kChar:
        push({Op::kChar, n.ch});
        break;
      case Node::Kind::kAny:
        push({Op::kAny});
        break;
      case Node::Kind::kClass:
        prog_.classes.push_back(n.ranges);
        push({Op::kClass, 0, static_cast<int>(prog_.classes.size() - 1)});
        break;
      case Node::Kind::kLineStart:
        push({Op::kLineStart});
        break;
      case Node::Kind::kLineEnd:
        push({Op::kLineEnd});
        break;
      case Node::Kind::kWordBoundary:
        push({Op::kWordBoundary});
        break;
      case Node::Kind::kNotWordBoundary:
        push({Op::kNotWordBoundary});
        break;
      case Node::Kind::kConcat:
        for (const Node& c : n.children) emit(c);
        break;
      case Node::Kind::kGroup:
        if (n.group >= 0) push({Op::kSave, 0, 2 * n.group});
        emit(n.children.front());
        if (n.group >= 0) push({Op::kSave, 0, 2 * n.group + 1});
        break;
      case Node::Kind::kAlternate: {
        std::vector<int> exits;
        for (size_t i = 0; i < n.children.size(); ++i) {
          if (i + 1 < n.children.size()) {
            int split = push({Op::kSplit});
            prog_.insts[split].x = here();
            emit(n.children[i]);
            exits.push_back(push({Op::kJmp}));
            prog_.insts[split].y = here();
          } else {
            emit(n.children[i]);
          }
        }
        for (int e : exits) prog_.insts[e].x = here();
        break;
      }
      case Node::Kind::kRepeat:
        emit_repeat(n);
        break;
    }
  }

 private:
  int here() const { return static_cast<int>(prog_.insts.size()); }
  int push(Inst i) {
    prog_.insts.push_back(i);
    return here() - 1;
  }

  void set_split(int at, int body, int exit, bool greedy) {
    prog_.insts[at].x = greedy ? body : exit;
    prog_.insts[at].y = greedy ? exit : body;
  }

  void emit_repeat(const Node& n) {
    const Node& body = n.children.front();
    for (int i = 0; i < n.min; ++i) emit(body);
    if (n.max == -1) {
      int split = push({Op::kSplit});
      int start = here();
      emit(body);
      push({Op::kJmp, 0, split});
      set_split(split, start, here(), n.greedy);
      return;
    }
    std::vector<int> splits;
    for (int i = n.min; i < n.max; ++i) {
      int split = push({Op::kSplit});
      splits.push_back(split);
      prog_.insts[split].x = here();
      emit(body);
    }
    for (int s : splits) set_split(s, s + 1, here(), n.greedy);
  }

  Regex::Program& prog_;
};

struct Thread {
  int pc;
  std::vector<int> caps;
};

class Vm {
 public:
  Vm(const Regex::Program& prog, const std::u32string& in)
      : prog_(prog), in_(in), mark_(prog.insts.size(), -1) {}

  std::optional<std::vector<int>> run(bool anchored) {
    const size_t n = in_.size();
    std::vector<Thread> clist;
    std::vector<Thread> nlist;
    std::optional<std::vector<int>> matched;
    const std::vector<int> fresh(2 * (prog_.groups + 1), -1);
    for (size_t pos = 0; pos <= n; ++pos) {
      if (!matched && (pos == 0 || !anchored)) {
        std::vector<int> caps = fresh;
        caps[0] = static_cast<int>(pos);
        add(clist, 0, caps, pos);
      }
      if (clist.empty()) {
        if (matched || anchored) break;
        continue;
      }
      for (const Thread& t : clist) {
        const Inst& inst = prog_.insts[t.pc];
        bool advance = false;
        switch (inst.op) {
          case Op::kMatch:
            if (anchored && pos != n) break;
            matched = t.caps;
            (*matched)[1] = static_cast<int>(pos);
            goto cut;
          case Op::kChar:
            advance = pos < n && in_[pos] == inst.ch;
            break;
          case Op::kAny:
            advance = pos < n && in_[pos] != U'\n';
            break;
          case Op::kClass:
            advance = pos < n && in_class(prog_.classes[inst.x], in_[pos]);
            break;
          default:
            break;
        }
        if (advance) add(nlist, t.pc + 1, t.caps, pos + 1);
      }
    cut:
      clist.swap(nlist);
      nlist.clear();
    }
    return matched;
  }

 private:
  static bool in_class(const Ranges& r, char32_t c) {
    auto it = std::upper_bound(
        r.begin(), r.end(), c,
        [](char32_t v, const std::pair<char32_t, char32_t>& range) { return v < range.first; });
    if (it == r.begin()) return false;
    --it;
    return c >= it->first && c <= it->second;
  }

  bool at_word_boundary(size_t pos) const {
    bool before = pos > 0 && is_word(in_[pos - 1]);
    bool after = pos < in_.size() && is_word(in_[pos]);
    return before != after;
  }

  void add(std::vector<Thread>& list, int pc, const std::vector<int>& caps, size_t pos) {
    const int gen = static_cast<int>(pos);
    if (mark_[pc] == gen) return;
    mark_[pc] = gen;
    const Inst& inst = prog_.insts[pc];
    switch (inst.op) {
      case Op::kJmp:
        add(list, inst.x, caps, pos);
        return;
      case Op::kSplit:
        add(list, inst.x, caps, pos);
        add(list, inst.y, caps, pos);
        return;
      case Op::kSave: {
        std::vector<int> c = caps;
        c[inst.x] = static_cast<int>(pos);
        add(list, pc + 1, c, pos);
        return;
      }
      case Op::kLineStart:
        if (pos == 0) add(list, pc + 1, caps, pos);
        return;
      case Op::kLineEnd:
        if (pos == in_.size()) add(list, pc + 1, caps, pos);
        return;
      case Op::kWordBoundary:
        if (at_word_boundary(pos)) add(list, pc + 1, caps, pos);
        return;
      case Op::kNotWordBoundary:
        if (!at_word_boundary(pos)) add(list, pc + 1, caps, pos);
        return;
      default:
        list.push_back({pc, caps});
        return;
    }
  }

  const Regex::Program& prog_;
  const std::u32string& in_;
  std::vector<int> mark_;
};

}  // namespace

Regex Regex::compile(std::string_view pattern) {
  Parser parser(text::utf8_decode(pattern));
  Node root = parser.parse();
  auto prog = std::make_shared<Program>();
  prog->groups = parser.group_count();
  Compiler compiler(*prog);
  compiler.emit(root);
  prog->insts.push_back({Op::kMatch});
  if (prog->insts.size() > kMaxProgramSize) throw RegexError(0, "pattern too large");
  return Regex(std::string(pattern), std::move(prog));
}

int Regex::group_count() const { return program_->groups; }

std::optional<Regex::Groups> Regex::run(std::string_view input, bool anchored) const {
  const std::u32string in = text::utf8_decode(input);
  Vm vm(*program_, in);
  auto caps = vm.run(anchored);
  if (!caps) return std::nullopt;
  Groups groups(program_->groups + 1);
  for (int g = 0; g <= program_->groups; ++g) {
    int b = (*caps)[2 * g];
    int e = (*caps)[2 * g + 1];
    if (b >= 0 && e >= b) {
      groups[g] = text::utf8_encode(std::u32string_view(in).substr(b, e - b));
    }
  }
  return groups;
}

bool Regex::full_match(std::string_view input) const {
  return run(input, true).has_value();
}

std::optional<Regex::Groups> Regex::full_match_groups(std::string_view input) const {
  return run(input, true);
}

std::optional<Regex::Groups> Regex::search(std::string_view input) const {
  return run(input, false);
}

}  // namespace sift
