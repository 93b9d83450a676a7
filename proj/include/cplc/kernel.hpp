#pragma once

#include "cplc/poly.hpp"
#include "cplc/problems.hpp"

namespace cplc {

/// Polynomial kernel for d-HITTING-SET, parameter k (the budget, in unary).
///
/// d = 2: Buss rules — move vertices of degree > k into the solution
/// (decrement k), drop isolated vertices, reject once more than k^2 edges or
/// more than k^2 + k covered vertices remain.
///
/// d >= 3: sunflower rule per uniform size class s — while a class holds
/// more than s! * k^s edges, replace a sunflower with k+1 petals by its
/// core; an empty core rejects.
///
/// The result decides identically to the input and respects
/// kernel_size_poly(d) evaluated at k. Rejections return the canonical
/// NO-sentinel ({1}, k=0).
Hypergraph kernelize_hitting_set(const Hypergraph& inst);

/// Mask-level core behind kernelize_hitting_set (vertex v is bit v-1,
/// n <= 32). Output masks are renumbered to the covered vertices and sorted
/// canonically (size, then lexicographic vertex list).
struct KernelMasks {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  bool rejected = false;  // stands for the NO-sentinel ({1}, k=0)
  std::vector<std::uint32_t> masks;
};
void kernelize_hitting_set_masks(std::uint32_t n, std::uint32_t d, std::uint32_t k,
                                 const std::uint32_t* edges, std::size_t m, KernelMasks& out);

/// Canonical encoded length of a kernel result, computed arithmetically
/// (matches kernelize_hitting_set(...).encode().size()).
std::uint64_t kernel_encoded_length(std::uint32_t d, const KernelMasks& km);

/// Declared bound on the encoded kernel length as a polynomial in |un(k)|.
PolyNat kernel_size_poly(std::uint32_t d);

/// Declared bound on the number of kernel edges, polynomial in k.
PolyNat kernel_edge_poly(std::uint32_t d);

}  // namespace cplc
