#pragma once

// Word-level kernels behind the bitset and ensemble arithmetic.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2
// variant is compiled into a separate translation unit and selected at
// runtime when the CPU supports it. Set FCAGENDA_KERNELS=scalar in the
// environment to force the reference path.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fcagenda::kernels {

using Word = std::uint64_t;

struct KernelTable {
  std::string_view name;

  // dst[i] = a[i] & b[i]
  void (*and_words)(Word* dst, const Word* a, const Word* b, std::size_t n);
  // dst[i] &= src[i]
  void (*and_assign)(Word* dst, const Word* src, std::size_t n);
  // (a & ~b) == 0 over all words
  bool (*is_subset)(const Word* a, const Word* b, std::size_t n);
  bool (*equal)(const Word* a, const Word* b, std::size_t n);
  bool (*intersects)(const Word* a, const Word* b, std::size_t n);
  std::size_t (*popcount)(const Word* a, std::size_t n);
  std::size_t (*and_popcount)(const Word* a, const Word* b, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table();

// Table used by the library; chosen once on first use.
const KernelTable& active();

}  // namespace fcagenda::kernels
