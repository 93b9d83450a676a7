#include "cplc/kernel.hpp"

#include <algorithm>
#include <bit>
#include <optional>

namespace cplc {

namespace {

std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::uint64_t factorial(std::uint32_t n) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 2; i <= n; ++i) r *= i;
  return r;
}

// Canonical edge order on masks: size first, then lexicographic ascending
// vertex lists (compare successive lowest set bits).
bool mask_edge_less(std::uint32_t a, std::uint32_t b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  while (a && b) {
    std::uint32_t la = a & (~a + 1), lb = b & (~b + 1);
    if (la != lb) return la < lb;
    a ^= la;
    b ^= lb;
  }
  return false;
}

struct Sunflower {
  std::uint32_t core = 0;
  std::vector<std::size_t> petals;
};

// Greedy sunflower search in a uniform family; guaranteed to find k+1
// petals when the family has more than s! * k^s members.
std::optional<Sunflower> find_sunflower(const std::vector<std::uint32_t>& family,
                                        std::uint32_t k) {
  std::vector<std::size_t> disjoint;
  std::uint32_t used = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i] & used) continue;
    disjoint.push_back(i);
    used |= family[i];
  }
  if (disjoint.size() >= k + 1) {
    disjoint.resize(k + 1);
    return Sunflower{0, std::move(disjoint)};
  }
  // every edge meets the union of the maximal disjoint family; pick the
  // most frequent vertex (smallest id on ties) and recurse on its link
  std::uint32_t best = 0;
  std::size_t best_count = 0;
  for (std::uint32_t rest = used; rest;) {
    std::uint32_t vbit = rest & (~rest + 1);
    rest ^= vbit;
    std::size_t count = 0;
    for (std::uint32_t e : family)
      if (e & vbit) ++count;
    if (count > best_count) {
      best = vbit;
      best_count = count;
    }
  }
  if (!best) return std::nullopt;
  std::vector<std::uint32_t> link;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!(family[i] & best)) continue;
    std::uint32_t rest = family[i] ^ best;
    if (!rest) continue;
    link.push_back(rest);
    origin.push_back(i);
  }
  auto sub = find_sunflower(link, k);
  if (!sub) return std::nullopt;
  Sunflower out;
  out.core = sub->core | best;
  for (std::size_t j : sub->petals) out.petals.push_back(origin[j]);
  return out;
}

void sort_dedup(std::vector<std::uint32_t>& masks) {
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
}

// Drop isolated vertices, renumber the covered ones ascending, sort edges
// canonically.
void pack(std::uint32_t k, std::vector<std::uint32_t>& masks, KernelMasks& out) {
  std::uint32_t covered = 0;
  for (std::uint32_t e : masks) covered |= e;
  std::uint8_t remap[32];
  std::uint32_t next = 0;
  for (std::uint32_t v = 0; v < 32; ++v)
    if (covered & (1u << v)) remap[v] = static_cast<std::uint8_t>(next++);
  out.n = next;
  out.k = k;
  out.rejected = false;
  out.masks.clear();
  out.masks.reserve(masks.size());
  for (std::uint32_t e : masks) {
    std::uint32_t r = 0;
    for (std::uint32_t rest = e; rest;) {
      std::uint32_t vbit = rest & (~rest + 1);
      rest ^= vbit;
      r |= 1u << remap[std::countr_zero(vbit)];
    }
    out.masks.push_back(r);
  }
  std::sort(out.masks.begin(), out.masks.end(), mask_edge_less);
}

void reject(KernelMasks& out) {
  out.n = 1;
  out.k = 0;
  out.rejected = true;
  out.masks = {1u};
}

}  // namespace

void kernelize_hitting_set_masks(std::uint32_t n, std::uint32_t d, std::uint32_t k,
                                 const std::uint32_t* edges, std::size_t m, KernelMasks& out) {
  if (n > 32) raise(Errc::scale_exceeded, "mask kernel needs n <= 32");
  std::vector<std::uint32_t> masks(edges, edges + m);
  sort_dedup(masks);

  if (k == 0) {
    if (masks.empty()) {
      pack(0, masks, out);
      return;
    }
    reject(out);
    return;
  }

  if (d == 2) {
    // Buss rules.
    while (true) {
      std::uint32_t heavy = 0;
      for (std::uint32_t v = 0; v < n && !heavy; ++v) {
        std::uint32_t vbit = 1u << v;
        std::uint32_t deg = 0;
        for (std::uint32_t e : masks)
          if (e & vbit) ++deg;
        if (deg > k) heavy = vbit;
      }
      if (!heavy) break;
      if (k == 0) {
        reject(out);
        return;
      }
      std::erase_if(masks, [heavy](std::uint32_t e) { return (e & heavy) != 0; });
      --k;
      if (k == 0 && !masks.empty()) {
        reject(out);
        return;
      }
    }
    if (masks.size() > static_cast<std::size_t>(k) * k) {
      reject(out);
      return;
    }
    std::uint32_t covered = 0;
    for (std::uint32_t e : masks) covered |= e;
    if (static_cast<std::size_t>(std::popcount(covered)) >
        static_cast<std::size_t>(k) * k + k) {
      reject(out);
      return;
    }
    pack(k, masks, out);
    return;
  }

  // d >= 3: per-size-class sunflower reduction.
  std::vector<std::uint32_t> family;
  while (true) {
    bool reduced = false;
    for (std::uint32_t s = 1; s <= d && !reduced; ++s) {
      family.clear();
      for (std::uint32_t e : masks)
        if (static_cast<std::uint32_t>(std::popcount(e)) == s) family.push_back(e);
      std::uint64_t bound = factorial(s) * pow_u64(k, s);
      if (family.size() <= bound) continue;
      std::sort(family.begin(), family.end(), mask_edge_less);
      auto sf = find_sunflower(family, k);
      if (!sf) raise(Errc::internal, "sunflower guaranteed but not found");
      if (sf->core == 0) {
        reject(out);
        return;
      }
      for (std::size_t i : sf->petals)
        std::erase(masks, family[i]);
      masks.push_back(sf->core);
      sort_dedup(masks);
      reduced = true;
    }
    if (!reduced) break;
  }
  pack(k, masks, out);
}

Hypergraph kernelize_hitting_set(const Hypergraph& inst) {
  if (!inst.canonical()) raise(Errc::malformed_instance, "hypergraph not canonical");
  auto masks = inst.edge_masks();
  KernelMasks km;
  kernelize_hitting_set_masks(inst.n, inst.d, inst.k, masks.data(), masks.size(), km);
  Hypergraph out;
  out.d = inst.d;
  out.n = km.n;
  out.k = km.k;
  out.edges.reserve(km.masks.size());
  for (std::uint32_t e : km.masks) {
    std::vector<std::uint32_t> edge;
    for (std::uint32_t rest = e; rest;) {
      std::uint32_t vbit = rest & (~rest + 1);
      rest ^= vbit;
      edge.push_back(static_cast<std::uint32_t>(std::countr_zero(vbit)) + 1);
    }
    out.edges.push_back(std::move(edge));
  }
  return out;
}

std::uint64_t kernel_encoded_length(std::uint32_t d, const KernelMasks& km) {
  // body = un(n) 0 un(d) 0 un(m) 0 edges; instance = pair(body, un(k))
  std::uint64_t body = (km.n + 1) + (d + 1) + (km.masks.size() + 1);
  for (std::uint32_t e : km.masks) {
    body += std::popcount(e) + 1;
    for (std::uint32_t rest = e; rest;) {
      std::uint32_t vbit = rest & (~rest + 1);
      rest ^= vbit;
      body += std::countr_zero(vbit) + 2;  // un(v) 0 with v = bit index + 1
    }
  }
  return 2 * body + 1 + km.k;
}

PolyNat kernel_edge_poly(std::uint32_t d) {
  if (d == 2) return PolyNat{0, 0, 1};  // k^2
  // sum over size classes: s! * k^s
  std::vector<std::uint64_t> coeffs(d + 1, 0);
  for (std::uint32_t s = 1; s <= d; ++s) coeffs[s] = factorial(s);
  return PolyNat(coeffs);
}

PolyNat kernel_size_poly(std::uint32_t d) {
  PolyNat n_poly, m_poly = kernel_edge_poly(d);
  if (d == 2) {
    n_poly = PolyNat{0, 1, 1};  // k^2 + k covered vertices
  } else {
    // each surviving edge covers at most s <= d vertices: sum s * s! * k^s
    std::vector<std::uint64_t> coeffs(d + 1, 0);
    for (std::uint32_t s = 1; s <= d; ++s) coeffs[s] = factorial(s) * s;
    n_poly = PolyNat(coeffs);
  }
  PolyNat one = PolyNat::constant(1);
  PolyNat dd = PolyNat::constant(d);
  // edge <= un(size)0 + size * un(v)0  with size <= d, v <= n'
  PolyNat edge_len = dd.add(one).add(dd.mul(n_poly.add(one)));
  PolyNat body = n_poly.add(one)
                     .add(dd.add(one))
                     .add(m_poly.add(one))
                     .add(m_poly.mul(edge_len));
  // pair(body, un(k')) with k' <= k; the constant also covers the
  // canonical NO-sentinel ({1}, k=0), which is 2d+19 bits.
  return PolyNat{1, 1}.add(body.mul(PolyNat::constant(2))).add(PolyNat::constant(2 * d + 19));
}

}  // namespace cplc
