#pragma once

// Explicit embeddings GF(p^n) -> GF(p^(nm)).

#include <optional>
#include <stdexcept>
#include <vector>

#include "cdiff/field.hpp"
#include "cdiff/poly.hpp"

namespace cdiff {

// Field homomorphism determined by the image of the source generator x.
class Embedding {
 public:
  Embedding(FieldPtr source, FieldPtr target, Elem generator_image)
      : source_(std::move(source)), target_(std::move(target)), image_(generator_image) {
    Elem power = 1;
    for (std::uint32_t i = 0; i < source_->degree(); ++i) {
      basis_images_.push_back(power);
      power = target_->mul(power, image_);
    }
  }

  const FieldPtr& source() const { return source_; }
  const FieldPtr& target() const { return target_; }
  Elem generator_image() const { return image_; }

  Elem operator()(Elem a) const {
    const auto d = source_->digits(a);
    Elem r = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] != 0) r = target_->add(r, target_->mul(d[i], basis_images_[i]));
    return r;
  }

  Poly map(const Poly& f) const {
    require_same_field(f.field(), source_);
    std::vector<Elem> v;
    for (Elem c : f.coeffs()) v.push_back((*this)(c));
    return Poly(target_, std::move(v));
  }

  // The source element mapping to y, if y lies in the image. Solves the
  // GF(p)-linear system on coordinates.
  std::optional<Elem> preimage(Elem y) const {
    const std::uint64_t p = target_->characteristic();
    const std::size_t n = source_->degree(), rows = target_->degree();
    // Augmented matrix rows x (n + 1).
    std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(n + 1, 0));
    for (std::size_t j = 0; j < n; ++j) {
      const auto d = target_->digits(basis_images_[j]);
      for (std::size_t i = 0; i < rows; ++i) a[i][j] = d[i];
    }
    const auto dy = target_->digits(y);
    for (std::size_t i = 0; i < rows; ++i) a[i][n] = dy[i];
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows; ++col) {
      std::size_t piv = r;
      while (piv < rows && a[piv][col] == 0) ++piv;
      if (piv == rows) continue;
      std::swap(a[r], a[piv]);
      const std::uint64_t inv = detail::mod_inv(a[r][col], p);
      for (auto& v : a[r]) v = v * inv % p;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || a[i][col] == 0) continue;
        const std::uint64_t f = a[i][col];
        for (std::size_t j = 0; j <= n; ++j) a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
      }
      pivot_col.push_back(col);
      ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
      if (a[i][n] != 0) return std::nullopt;
    std::vector<std::uint32_t> x(n, 0);
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = static_cast<std::uint32_t>(a[i][n]);
    return source_->from_digits(x);
  }

 private:
  FieldPtr source_;
  FieldPtr target_;
  Elem image_;
  std::vector<Elem> basis_images_;
};

struct Extension {
  FieldPtr field;
  Embedding embedding;
};

// GF(p^(nm)) with its default modulus, plus an embedding of base. The image
// of the base generator is the smallest root of the base modulus in the
// target.
inline Extension extend(const FieldPtr& base, std::uint32_t m, std::uint64_t order_cap = kDefaultOrderCap) {
  if (m < 1) throw FieldError("extension degree must be at least 1");
  FieldPtr target = make_field(base->characteristic(), base->degree() * m, std::nullopt, order_cap);
  std::vector<Elem> mod;
  for (auto c : base->modulus()) mod.push_back(c);  // prime-field digits encode identically
  const auto rs = roots(Poly(target, std::move(mod)));
  if (rs.empty()) throw FieldError("base modulus has no root in the extension");
  return Extension{target, Embedding(base, target, rs.front())};
}

}  // namespace cdiff
