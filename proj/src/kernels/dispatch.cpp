// Variant selection only; no intrinsics here.

#include <cstdlib>
#include <string>

#include "commons/error.hpp"
#include "commons/kernels.hpp"

namespace commons::kernels {

#ifdef COMMONS_HAVE_AVX2
const Table* avx2_table_impl() noexcept;
#endif

namespace {

bool host_has_avx2() noexcept {
#if defined(COMMONS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Variant select() noexcept {
  if (const char* env = std::getenv("COMMONS_DYN_KERNELS")) {
    if (std::string(env) == "scalar") return Variant::kScalar;
  }
  return host_has_avx2() ? Variant::kAvx2 : Variant::kScalar;
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::kScalar:
      return "scalar";
    case Variant::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const Table* avx2_table() noexcept {
#ifdef COMMONS_HAVE_AVX2
  static const bool ok = host_has_avx2();
  return ok ? avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

bool variant_available(Variant v) noexcept {
  return v == Variant::kScalar || avx2_table() != nullptr;
}

Variant active_variant() noexcept {
  static const Variant v = select();
  return v;
}

const Table& table(Variant v) {
  if (v == Variant::kScalar) return scalar_table();
  if (const Table* t = avx2_table()) return *t;
  throw Error(ErrorCode::kInvalidParams, "avx2 kernels unavailable on this host");
}

const Table& active() noexcept {
  static const Table& t = active_variant() == Variant::kAvx2 ? *avx2_table()
                                                             : scalar_table();
  return t;
}

}  // namespace commons::kernels
