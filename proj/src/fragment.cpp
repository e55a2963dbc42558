// Copyright 2026 The boundsem Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cctype>
#include <map>

#include "boundsem/fragment.hpp"
#include "fragment_internal.hpp"

namespace boundsem {

struct Fragment::Rep {
  Tag tag = Tag::Star;
  bool uniform = false;
  bool symbolic = false;
  std::vector<Entry> entries;
  std::vector<Component> comps;
  Fragment top, value;
  std::size_t depth = 1;
  std::size_t size = 1;
};

namespace {

const std::vector<Fragment::Entry> kNoEntries;
const std::vector<Fragment::Component> kNoComponents;
const Fragment kStar;

const char* tag_name(Fragment::Tag t) {
  switch (t) {
    case Fragment::Tag::Star: return "*";
    case Fragment::Tag::FnMap: return "fn";
    case Fragment::Tag::IndexMap: return "imap";
    case Fragment::Tag::ComponentSet: return "cset";
  }
  return "?";
}

void absorb(std::size_t& depth, std::size_t& size, bool& symbolic, const Fragment& child) {
  depth = std::max(depth, child.depth() + 1);
  size += child.size();
  symbolic = symbolic || child.contains_symbolic();
}

std::vector<Fragment::Component> sorted_components(std::vector<Fragment::Component> cs) {
  std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < cs.size(); ++i)
    if (cs[i - 1].first == cs[i].first)
      throw Error("repeated index " + std::to_string(cs[i].first) + " in fragment");
  return cs;
}

}  // namespace

Fragment Fragment::fn_map(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return compare(a.first, b.first) < 0; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (compare(entries[i - 1].first, entries[i].first) == 0)
      throw Error("repeated key " + encode(entries[i].first) + " in fn map");
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::FnMap;
  for (const auto& [k, v] : entries) {
    absorb(rep->depth, rep->size, rep->symbolic, k);
    absorb(rep->depth, rep->size, rep->symbolic, v);
  }
  rep->entries = std::move(entries);
  return Fragment(std::move(rep));
}

Fragment Fragment::fn_below(Fragment top, Fragment value) {
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::FnMap;
  rep->uniform = true;
  rep->symbolic = true;
  absorb(rep->depth, rep->size, rep->symbolic, top);
  absorb(rep->depth, rep->size, rep->symbolic, value);
  rep->top = std::move(top);
  rep->value = std::move(value);
  return Fragment(std::move(rep));
}

Fragment Fragment::index_map(std::vector<Component> components) {
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::IndexMap;
  rep->comps = sorted_components(std::move(components));
  for (const auto& c : rep->comps) absorb(rep->depth, rep->size, rep->symbolic, c.second);
  return Fragment(std::move(rep));
}

Fragment Fragment::component_set(std::vector<Component> components) {
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::ComponentSet;
  rep->comps = sorted_components(std::move(components));
  for (const auto& c : rep->comps) absorb(rep->depth, rep->size, rep->symbolic, c.second);
  return Fragment(std::move(rep));
}

Fragment::Tag Fragment::tag() const { return rep_ ? rep_->tag : Tag::Star; }
bool Fragment::is_uniform() const { return rep_ && rep_->uniform; }
const std::vector<Fragment::Entry>& Fragment::entries() const {
  return rep_ && rep_->tag == Tag::FnMap ? rep_->entries : kNoEntries;
}
const Fragment& Fragment::top() const { return is_uniform() ? rep_->top : kStar; }
const Fragment& Fragment::uniform_value() const { return is_uniform() ? rep_->value : kStar; }
const std::vector<Fragment::Component>& Fragment::components() const {
  return rep_ ? rep_->comps : kNoComponents;
}
std::size_t Fragment::depth() const { return rep_ ? rep_->depth : 0; }
std::size_t Fragment::size() const { return rep_ ? rep_->size : 1; }
bool Fragment::contains_symbolic() const { return rep_ && rep_->symbolic; }

const Fragment* Fragment::component(Nat i) const {
  const auto& cs = components();
  auto it = std::lower_bound(cs.begin(), cs.end(), i,
                             [](const Component& c, Nat v) { return c.first < v; });
  return it != cs.end() && it->first == i ? &it->second : nullptr;
}

const Fragment* Fragment::find(const Fragment& key) const {
  const auto& es = entries();
  auto it = std::lower_bound(es.begin(), es.end(), key,
                             [](const Entry& e, const Fragment& k) { return compare(e.first, k) < 0; });
  return it != es.end() && compare(it->first, key) == 0 ? &it->second : nullptr;
}

int compare(const Fragment& a, const Fragment& b) {
  if (a.rep_ == b.rep_) return 0;
  auto ta = a.tag(), tb = b.tag();
  if (ta != tb) return ta < tb ? -1 : 1;
  const auto& x = *a.rep_;
  const auto& y = *b.rep_;
  if (ta == Fragment::Tag::FnMap) {
    if (x.uniform != y.uniform) return x.uniform ? 1 : -1;
    if (x.uniform) {
      int c = compare(x.top, y.top);
      return c ? c : compare(x.value, y.value);
    }
    if (x.entries.size() != y.entries.size()) return x.entries.size() < y.entries.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.entries.size(); ++i) {
      if (int c = compare(x.entries[i].first, y.entries[i].first)) return c;
      if (int c = compare(x.entries[i].second, y.entries[i].second)) return c;
    }
    return 0;
  }
  if (x.comps.size() != y.comps.size()) return x.comps.size() < y.comps.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.comps.size(); ++i) {
    if (x.comps[i].first != y.comps[i].first) return x.comps[i].first < y.comps[i].first ? -1 : 1;
    if (int c = compare(x.comps[i].second, y.comps[i].second)) return c;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

void encode_to(const Fragment& f, std::string& out) {
  switch (f.tag()) {
    case Fragment::Tag::Star:
      out += '*';
      return;
    case Fragment::Tag::FnMap:
      if (f.is_uniform()) {
        out += "(fnbelow ";
        encode_to(f.top(), out);
        out += ' ';
        encode_to(f.uniform_value(), out);
        out += ')';
        return;
      }
      out += "(fn";
      for (const auto& [k, v] : f.entries()) {
        out += " (";
        encode_to(k, out);
        out += ' ';
        encode_to(v, out);
        out += ')';
      }
      out += ')';
      return;
    case Fragment::Tag::IndexMap:
    case Fragment::Tag::ComponentSet:
      out += f.tag() == Fragment::Tag::IndexMap ? "(imap" : "(cset";
      for (const auto& [i, c] : f.components()) {
        out += " (" + std::to_string(i) + ' ';
        encode_to(c, out);
        out += ')';
      }
      out += ')';
      return;
  }
}

class Decoder {
 public:
  explicit Decoder(std::string_view s) : s_(s) {}

  Fragment run() {
    Fragment f = fragment();
    skip();
    if (pos_ != s_.size()) throw ParseError("trailing input after fragment", pos_);
    return f;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected a word", pos_);
    return std::string(s_.substr(start, pos_ - start));
  }
  Nat number() {
    skip();
    std::size_t start = pos_;
    std::string w = word();
    if (!std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("expected an index", start);
    try {
      return std::stoull(w);
    } catch (const std::exception&) {
      throw ParseError("index out of range", start);
    }
  }

  Fragment fragment() {
    skip();
    if (peek('*')) {
      ++pos_;
      return Fragment::star();
    }
    expect('(');
    std::size_t head_pos = pos_;
    std::string head = word();
    if (head == "fn") {
      std::vector<Fragment::Entry> es;
      while (!peek(')')) {
        std::size_t at = pos_;
        expect('(');
        Fragment k = fragment();
        Fragment v = fragment();
        expect(')');
        for (const auto& e : es)
          if (e.first == k) throw ParseError("repeated key", at);
        es.emplace_back(std::move(k), std::move(v));
      }
      ++pos_;
      return Fragment::fn_map(std::move(es));
    }
    if (head == "fnbelow") {
      Fragment top = fragment();
      Fragment value = fragment();
      expect(')');
      return Fragment::fn_below(std::move(top), std::move(value));
    }
    if (head == "imap" || head == "cset") {
      std::vector<Fragment::Component> cs;
      while (!peek(')')) {
        expect('(');
        std::size_t at = pos_;
        Nat i = number();
        for (const auto& c : cs)
          if (c.first == i) throw ParseError("repeated index", at);
        Fragment c = fragment();
        expect(')');
        cs.emplace_back(i, std::move(c));
      }
      ++pos_;
      return head == "imap" ? Fragment::index_map(std::move(cs)) : Fragment::component_set(std::move(cs));
    }
    throw ParseError("unknown fragment constructor '" + head + "'", head_pos);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode(const Fragment& f) {
  std::string out;
  encode_to(f, out);
  return out;
}

Fragment decode(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw ParseError("empty fragment", 0);
  return Decoder(text).run();
}

// ---------------------------------------------------------------------------
// Kinds

FragmentKind::FragmentKind(Role role, ShapePtr shape) : role_(role), shape_(std::move(shape)) {
  if (!shape_) throw Error("fragment kind without a shape");
  while (role_ == Role::Exists && shape_->kind == Shape::Kind::Not) {
    role_ = Role::Forall;
    shape_ = shape_->child;
  }
  if (shape_->kind == Shape::Kind::Atom) role_ = Role::Forall;
}

Fragment::Tag FragmentKind::tag() const {
  switch (shape_->kind) {
    case Shape::Kind::Atom: return Fragment::Tag::Star;
    case Shape::Kind::Not: return Fragment::Tag::FnMap;
    case Shape::Kind::And:
      return role_ == Role::Forall ? Fragment::Tag::IndexMap : Fragment::Tag::ComponentSet;
  }
  return Fragment::Tag::Star;
}

FragmentKind FragmentKind::key() const {
  if (shape_->kind != Shape::Kind::Not) throw ShapeMismatch("kind " + to_string(*this) + " has no keys");
  return FragmentKind(Role::Forall, shape_->child);
}

FragmentKind FragmentKind::value() const {
  if (shape_->kind != Shape::Kind::Not) throw ShapeMismatch("kind " + to_string(*this) + " has no values");
  return FragmentKind(Role::Exists, shape_->child);
}

FragmentKind FragmentKind::component(Nat i) const {
  if (shape_->kind != Shape::Kind::And || !shape_->has_component(i))
    throw ShapeMismatch("kind " + to_string(*this) + " has no component " + std::to_string(i));
  return FragmentKind(role_, shape_->component(i));
}

bool FragmentKind::has_component(Nat i) const {
  return shape_->kind == Shape::Kind::And && shape_->has_component(i);
}

bool operator==(const FragmentKind& a, const FragmentKind& b) {
  return a.role_ == b.role_ && (a.shape_ == b.shape_ || same_shape(*a.shape_, *b.shape_));
}

std::string to_string(const FragmentKind& k) {
  return std::string(k.role() == Role::Forall ? "forall:" : "exists:") + to_string(*k.shape());
}

void check_shape(const FragmentKind& kind, const Fragment& f) {
  if (f.tag() != kind.tag()) {
    std::string text = encode(f);
    if (text.size() > 60) text = text.substr(0, 57) + "...";
    throw ShapeMismatch(std::string("expected a ") + tag_name(kind.tag()) + " fragment for " +
                        to_string(kind) + ", got " + text);
  }
  switch (f.tag()) {
    case Fragment::Tag::Star:
      return;
    case Fragment::Tag::FnMap:
      if (f.is_uniform()) {
        check_shape(kind.key(), f.top());
        check_shape(kind.value(), f.uniform_value());
      } else {
        FragmentKind kk = kind.key(), vk = kind.value();
        for (const auto& [k, v] : f.entries()) {
          check_shape(kk, k);
          check_shape(vk, v);
        }
      }
      return;
    case Fragment::Tag::IndexMap:
    case Fragment::Tag::ComponentSet:
      for (const auto& [i, c] : f.components()) {
        if (!kind.has_component(i))
          throw ShapeMismatch("index " + std::to_string(i) + " is outside " + to_string(kind));
        check_shape(kind.component(i), c);
      }
      return;
  }
}

// ---------------------------------------------------------------------------
// Orders, enumeration, validity

namespace detail {

void sort_unique(std::vector<Fragment>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Fragment materialize(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  if (!f.is_uniform()) return f;
  std::vector<Fragment::Entry> es;
  for (auto& k : below_rec(kind.key(), f.top(), cap)) es.emplace_back(std::move(k), f.uniform_value());
  return Fragment::fn_map(std::move(es));
}

std::optional<std::size_t> lookup_index(const FragmentKind& key_kind, const Fragment& f, const Fragment& key,
                                        std::size_t cap) {
  const auto& es = f.entries();
  auto it = std::lower_bound(es.begin(), es.end(), key, [](const Fragment::Entry& e, const Fragment& k) {
    return compare(e.first, k) < 0;
  });
  if (it != es.end() && compare(it->first, key) == 0) return static_cast<std::size_t>(it - es.begin());
  if (!f.contains_symbolic() && !key.contains_symbolic()) return std::nullopt;
  for (std::size_t i = 0; i < es.size(); ++i)
    if (leq_rec(key_kind, es[i].first, key, cap) && leq_rec(key_kind, key, es[i].first, cap)) return i;
  return std::nullopt;
}

const Fragment* lookup(const FragmentKind& key_kind, const Fragment& f, const Fragment& key,
                       std::size_t cap) {
  auto i = lookup_index(key_kind, f, key, cap);
  return i ? &f.entries()[*i].second : nullptr;
}

bool leq_rec(const FragmentKind& kind, const Fragment& f, const Fragment& g, std::size_t cap) {
  if (f.same_node(g)) return true;
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return true;
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      if (f.is_uniform() && g.is_uniform()) {
        bool same_top = compare(f.top(), g.top()) == 0 ||
                        (leq_rec(kk, f.top(), g.top(), cap) && leq_rec(kk, g.top(), f.top(), cap));
        return same_top && leq_rec(vk, f.uniform_value(), g.uniform_value(), cap);
      }
      Fragment F = materialize(kind, f, cap), G = materialize(kind, g, cap);
      if (F.entries().size() != G.entries().size()) return false;
      for (const auto& [k, v] : F.entries()) {
        const Fragment* w = lookup(kk, G, k, cap);
        if (!w || !leq_rec(vk, v, *w, cap)) return false;
      }
      return true;
    }
    case Fragment::Tag::IndexMap:
      for (const auto& [i, c] : f.components()) {
        const Fragment* d = g.component(i);
        if (!d || !leq_rec(kind.component(i), c, *d, cap)) return false;
      }
      return true;
    case Fragment::Tag::ComponentSet:
      if (f.components().size() != g.components().size()) return false;
      for (const auto& [i, c] : f.components()) {
        const Fragment* d = g.component(i);
        if (!d || !leq_rec(kind.component(i), c, *d, cap)) return false;
      }
      return true;
  }
  return false;
}

bool subseteq_rec(const FragmentKind& kind, const Fragment& f, const Fragment& g, std::size_t cap) {
  if (f.same_node(g)) return true;
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return true;
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      if (g.is_uniform()) {
        if (f.is_uniform())
          return leq_rec(kk, f.top(), g.top(), cap) && subseteq_rec(vk, f.uniform_value(), g.uniform_value(), cap);
        for (const auto& [k, v] : f.entries())
          if (!leq_rec(kk, k, g.top(), cap) || !subseteq_rec(vk, v, g.uniform_value(), cap)) return false;
        return true;
      }
      Fragment F = materialize(kind, f, cap);
      if (F.entries().size() > g.entries().size()) return false;
      for (const auto& [k, v] : F.entries()) {
        const Fragment* w = lookup(kk, g, k, cap);
        if (!w || !subseteq_rec(vk, v, *w, cap)) return false;
      }
      return true;
    }
    case Fragment::Tag::IndexMap:
      if (f.components().size() != g.components().size()) return false;
      for (const auto& [i, c] : f.components()) {
        const Fragment* d = g.component(i);
        if (!d || !subseteq_rec(kind.component(i), c, *d, cap)) return false;
      }
      return true;
    case Fragment::Tag::ComponentSet:
      for (const auto& [i, c] : f.components()) {
        const Fragment* d = g.component(i);
        if (!d || !subseteq_rec(kind.component(i), c, *d, cap)) return false;
      }
      return true;
  }
  return false;
}

namespace {

std::size_t checked_product(const std::vector<std::size_t>& sizes, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t s : sizes) {
    if (s == 0) return 0;
    if (total > cap / s) throw BoundTooLarge("more than " + std::to_string(cap) + " fragments below a bound");
    total *= s;
  }
  return total;
}

// Relations among the keys of an explicit FnMap that the validity
// conditions consult.
struct KeyInfo {
  bool closed = true;                                   // <=-downward closed
  std::vector<std::pair<std::size_t, std::size_t>> sub;  // keys[i] ⊆ keys[j], i != j
  std::vector<std::pair<std::size_t, std::size_t>> le;   // keys[i] <= keys[j], i != j
};

KeyInfo key_info(const FragmentKind& kk, const Fragment& f, std::size_t cap) {
  KeyInfo info;
  const auto& es = f.entries();
  for (std::size_t j = 0; j < es.size(); ++j) {
    for (const auto& a : below_rec(kk, es[j].first, cap)) {
      auto i = lookup_index(kk, f, a, cap);
      if (!i) {
        info.closed = false;
        return info;
      }
      if (*i != j) info.le.emplace_back(*i, j);
    }
    for (std::size_t i = 0; i < es.size(); ++i)
      if (i != j && subseteq_rec(kk, es[i].first, es[j].first, cap)) info.sub.emplace_back(i, j);
  }
  return info;
}

bool values_ok(const FragmentKind& vk, const KeyInfo& info, const std::vector<const Fragment*>& vals,
               std::map<Fragment, std::vector<Fragment>>& memo, std::size_t cap) {
  for (auto [i, j] : info.sub)
    if (!subseteq_rec(vk, *vals[i], *vals[j], cap)) return false;
  for (auto [i, j] : info.le) {
    auto it = memo.find(*vals[j]);
    if (it == memo.end()) it = memo.emplace(*vals[j], below_rec(vk, *vals[j], cap)).first;
    bool found = false;
    for (const auto& b : it->second)
      if (subseteq_rec(vk, b, *vals[i], cap)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace

std::vector<Fragment> below_rec(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return {f};
    case Fragment::Tag::IndexMap:
    case Fragment::Tag::ComponentSet: {
      const bool optional = kind.tag() == Fragment::Tag::IndexMap;
      const auto& cs = f.components();
      std::vector<std::vector<Fragment>> opts;
      std::vector<std::size_t> sizes;
      for (const auto& [i, c] : cs) {
        opts.push_back(below_rec(kind.component(i), c, cap));
        sizes.push_back(opts.back().size() + (optional ? 1 : 0));
      }
      std::size_t total = checked_product(sizes, cap);
      std::vector<Fragment> out;
      out.reserve(total);
      std::vector<std::size_t> pick(cs.size(), 0);
      for (std::size_t n = 0; n < total; ++n) {
        std::vector<Fragment::Component> comps;
        for (std::size_t k = 0; k < cs.size(); ++k)
          if (pick[k] < opts[k].size()) comps.emplace_back(cs[k].first, opts[k][pick[k]]);
        out.push_back(optional ? Fragment::index_map(std::move(comps)) : Fragment::component_set(std::move(comps)));
        for (std::size_t k = 0; k < cs.size(); ++k) {
          if (++pick[k] < sizes[k]) break;
          pick[k] = 0;
        }
      }
      sort_unique(out);
      return out;
    }
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      if (f.is_uniform()) {
        if (below_rec(vk, f.uniform_value(), cap).size() == 1) return {f};
      }
      Fragment F = materialize(kind, f, cap);
      const auto& es = F.entries();
      std::vector<std::vector<Fragment>> opts;
      std::vector<std::size_t> sizes;
      bool trivial = true;
      for (const auto& e : es) {
        opts.push_back(below_rec(vk, e.second, cap));
        sizes.push_back(opts.back().size());
        trivial = trivial && sizes.back() == 1;
      }
      if (trivial) return {f};
      std::size_t total = checked_product(sizes, cap);
      KeyInfo info = key_info(kk, F, cap);
      if (!info.closed) return {};
      std::map<Fragment, std::vector<Fragment>> memo;
      std::vector<Fragment> out;
      std::vector<std::size_t> pick(es.size(), 0);
      std::vector<const Fragment*> vals(es.size());
      for (std::size_t n = 0; n < total; ++n) {
        for (std::size_t k = 0; k < es.size(); ++k) vals[k] = &opts[k][pick[k]];
        if (values_ok(vk, info, vals, memo, cap)) {
          std::vector<Fragment::Entry> entries;
          for (std::size_t k = 0; k < es.size(); ++k) entries.emplace_back(es[k].first, *vals[k]);
          out.push_back(Fragment::fn_map(std::move(entries)));
        }
        for (std::size_t k = 0; k < es.size(); ++k) {
          if (++pick[k] < sizes[k]) break;
          pick[k] = 0;
        }
      }
      sort_unique(out);
      return out;
    }
  }
  return {};
}

bool valid_rec(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return true;
    case Fragment::Tag::IndexMap:
    case Fragment::Tag::ComponentSet:
      for (const auto& [i, c] : f.components())
        if (!valid_rec(kind.component(i), c, cap)) return false;
      return true;
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      if (f.is_uniform()) return valid_rec(kk, f.top(), cap) && valid_rec(vk, f.uniform_value(), cap);
      std::vector<const Fragment*> vals;
      for (const auto& [k, v] : f.entries()) {
        if (!valid_rec(kk, k, cap) || !valid_rec(vk, v, cap)) return false;
        vals.push_back(&v);
      }
      KeyInfo info = key_info(kk, f, cap);
      if (!info.closed) return false;
      std::map<Fragment, std::vector<Fragment>> memo;
      return values_ok(vk, info, vals, memo, cap);
    }
  }
  return false;
}

Fragment restrict_rec(const FragmentKind& kind, const Fragment& f, const Fragment& f2, const Fragment& fs,
                      std::size_t cap) {
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return Fragment::star();
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      if (f.is_uniform() && f2.is_uniform() && fs.is_uniform())
        return Fragment::fn_below(fs.top(), restrict_rec(vk, f.uniform_value(), f2.uniform_value(),
                                                         fs.uniform_value(), cap));
      Fragment F = materialize(kind, f, cap), F2 = materialize(kind, f2, cap), FS = materialize(kind, fs, cap);
      std::vector<Fragment::Entry> es;
      for (const auto& [a, vs] : FS.entries()) {
        const Fragment* vf = lookup(kk, F, a, cap);
        const Fragment* v2 = lookup(kk, F2, a, cap);
        if (!vf || !v2) throw PreconditionError("restrict: key " + encode(a) + " missing from f or f'");
        es.emplace_back(a, restrict_rec(vk, *vf, *v2, vs, cap));
      }
      return Fragment::fn_map(std::move(es));
    }
    case Fragment::Tag::IndexMap: {
      std::vector<Fragment::Component> cs;
      for (const auto& [i, c2] : f2.components()) {
        const Fragment* cf = f.component(i);
        const Fragment* cs_ = fs.component(i);
        if (!cf || !cs_) throw PreconditionError("restrict: index " + std::to_string(i) + " missing");
        cs.emplace_back(i, restrict_rec(kind.component(i), *cf, c2, *cs_, cap));
      }
      return Fragment::index_map(std::move(cs));
    }
    case Fragment::Tag::ComponentSet: {
      std::vector<Fragment::Component> cs;
      for (const auto& [i, c] : fs.components()) {
        const Fragment* cf = f.component(i);
        const Fragment* c2 = f2.component(i);
        if (!cf || !c2) throw PreconditionError("restrict: index " + std::to_string(i) + " missing");
        cs.emplace_back(i, restrict_rec(kind.component(i), *cf, *c2, c, cap));
      }
      return Fragment::component_set(std::move(cs));
    }
  }
  return Fragment::star();
}

}  // namespace detail

namespace {

Fragment min_rec(const FragmentKind& kind, const Fragment& f, const Fragment& g0, const Fragment& g1,
                 std::size_t cap) {
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return Fragment::star();
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      if (f.is_uniform() && g0.is_uniform() && g1.is_uniform())
        return Fragment::fn_below(f.top(), min_rec(vk, f.uniform_value(), g0.uniform_value(), g1.uniform_value(), cap));
      Fragment F = detail::materialize(kind, f, cap);
      Fragment G0 = detail::materialize(kind, g0, cap), G1 = detail::materialize(kind, g1, cap);
      std::vector<Fragment::Entry> es;
      for (const auto& [a, v] : F.entries()) {
        const Fragment* x = detail::lookup(kk, G0, a, cap);
        const Fragment* y = detail::lookup(kk, G1, a, cap);
        if (!x || !y) throw PreconditionError("min3: domains differ at " + encode(a));
        es.emplace_back(a, min_rec(vk, v, *x, *y, cap));
      }
      return Fragment::fn_map(std::move(es));
    }
    case Fragment::Tag::IndexMap: {
      std::vector<Fragment::Component> cs;
      for (const auto& [i, c0] : g0.components())
        if (const Fragment* c1 = g1.component(i)) {
          const Fragment* cf = f.component(i);
          if (!cf) throw PreconditionError("min3: index " + std::to_string(i) + " missing from f");
          cs.emplace_back(i, min_rec(kind.component(i), *cf, c0, *c1, cap));
        }
      return Fragment::index_map(std::move(cs));
    }
    case Fragment::Tag::ComponentSet: {
      std::vector<Fragment::Component> cs;
      for (const auto& [i, cf] : f.components()) {
        const Fragment* c0 = g0.component(i);
        const Fragment* c1 = g1.component(i);
        if (!c0 || !c1) throw PreconditionError("min3: index " + std::to_string(i) + " missing");
        cs.emplace_back(i, min_rec(kind.component(i), cf, *c0, *c1, cap));
      }
      return Fragment::component_set(std::move(cs));
    }
  }
  return Fragment::star();
}

Fragment expand_rec(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  if (!f.contains_symbolic()) return f;
  switch (kind.tag()) {
    case Fragment::Tag::Star:
      return f;
    case Fragment::Tag::FnMap: {
      FragmentKind kk = kind.key(), vk = kind.value();
      Fragment F = detail::materialize(kind, f, cap);
      std::vector<Fragment::Entry> es;
      for (const auto& [k, v] : F.entries()) es.emplace_back(expand_rec(kk, k, cap), expand_rec(vk, v, cap));
      return Fragment::fn_map(std::move(es));
    }
    case Fragment::Tag::IndexMap:
    case Fragment::Tag::ComponentSet: {
      std::vector<Fragment::Component> cs;
      for (const auto& [i, c] : f.components()) cs.emplace_back(i, expand_rec(kind.component(i), c, cap));
      return kind.tag() == Fragment::Tag::IndexMap ? Fragment::index_map(std::move(cs))
                                                   : Fragment::component_set(std::move(cs));
    }
  }
  return f;
}

}  // namespace

bool is_valid(const FragmentKind& kind, const Fragment& f) {
  check_shape(kind, f);
  return detail::valid_rec(kind, f, kDefaultCap);
}

bool subseteq(const FragmentKind& kind, const Fragment& f, const Fragment& g) {
  check_shape(kind, f);
  check_shape(kind, g);
  return detail::subseteq_rec(kind, f, g, kDefaultCap);
}

bool leq(const FragmentKind& kind, const Fragment& f, const Fragment& g) {
  check_shape(kind, f);
  check_shape(kind, g);
  return detail::leq_rec(kind, f, g, kDefaultCap);
}

std::optional<Fragment> apply(const FragmentKind& kind, const Fragment& f, const Fragment& key) {
  check_shape(kind, f);
  FragmentKind kk = kind.key();
  check_shape(kk, key);
  if (f.is_uniform()) {
    if (detail::leq_rec(kk, key, f.top(), kDefaultCap)) return f.uniform_value();
    return std::nullopt;
  }
  if (const Fragment* v = detail::lookup(kk, f, key, kDefaultCap)) return *v;
  return std::nullopt;
}

std::vector<Fragment> domain(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  check_shape(kind, f);
  if (f.is_uniform()) return detail::below_rec(kind.key(), f.top(), cap);
  std::vector<Fragment> out;
  for (const auto& e : f.entries()) out.push_back(e.first);
  return out;
}

std::vector<Fragment> enumerate_below(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  check_shape(kind, f);
  return detail::below_rec(kind, f, cap);
}

Fragment min3(const FragmentKind& kind, const Fragment& f, const Fragment& g0, const Fragment& g1) {
  if (!leq(kind, g0, f) || !leq(kind, g1, f)) throw PreconditionError("min3 requires g0 <= f and g1 <= f");
  return min_rec(kind, f, g0, g1, kDefaultCap);
}

Fragment restrict(const FragmentKind& kind, const Fragment& f, const Fragment& f2, const Fragment& fstar) {
  if (!leq(kind, f2, f)) throw PreconditionError("restrict requires f' <= f");
  if (!subseteq(kind, fstar, f)) throw PreconditionError("restrict requires f* ⊆ f");
  return detail::restrict_rec(kind, f, f2, fstar, kDefaultCap);
}

Fragment expand(const FragmentKind& kind, const Fragment& f, std::size_t cap) {
  check_shape(kind, f);
  return expand_rec(kind, f, cap);
}

bool equivalent(const FragmentKind& kind, const Fragment& f, const Fragment& g, std::size_t cap) {
  if (f == g) return true;
  return expand(kind, f, cap) == expand(kind, g, cap);
}

}  // namespace boundsem
