// Copyright 2026 The docbot Authors
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

#include "docbot/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "docbot/error.hpp"

namespace docbot::nn {
namespace {

[[noreturn]] void shape_error(const char *op, const Shape &a, const Shape &b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + a.str() + " and " +
                   b.str());
}

[[noreturn]] void shape_error(const char *op, const Shape &a) {
  throw ShapeError(std::string(op) + ": unsupported shape " + a.str());
}

Tape &same_tape(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw UsageError("operands recorded on different tapes");
  return a.tape();
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// Applies f elementwise; backward multiplies by df(x, y).
template <typename F, typename DF>
Var unary(Var a, F f, DF df) {
  const Tensor &x = a.value();
  Tensor y(x.shape());
  for (size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  uint32_t ia = a.id();
  return a.tape().record(std::move(y), {a}, [ia, df](Tape &t, uint32_t self) {
    Tensor *ga = t.accumulator(ia);
    const Tensor &g = t.grad(self);
    const Tensor &x = t.value(ia);
    const Tensor &y = t.value(self);
    for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * df(x[i], y[i]);
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape &tape = same_tape(a, b);
  const Tensor &A = a.value();
  const Tensor &B = b.value();
  const uint32_t ia = a.id(), ib = b.id();

  if (A.rank() == 2 && B.rank() == 2) {
    const size_t m = A.dim(0), k = A.dim(1), n = B.dim(1);
    if (B.dim(0) != k) shape_error("matmul", A.shape(), B.shape());
    Tensor C(Shape{m, n});
    for (size_t i = 0; i < m; ++i) {
      for (size_t p = 0; p < k; ++p) {
        const double av = A[i * k + p];
        const double *brow = &B.data()[p * n];
        double *crow = &C.data()[i * n];
        for (size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
      }
    }
    return tape.record(std::move(C), {a, b}, [ia, ib, m, k, n](Tape &t, uint32_t self) {
      const Tensor &G = t.grad(self);
      const Tensor &A = t.value(ia);
      const Tensor &B = t.value(ib);
      if (Tensor *gA = t.accumulator(ia)) {
        for (size_t i = 0; i < m; ++i) {
          for (size_t p = 0; p < k; ++p) {
            double s = 0;
            for (size_t j = 0; j < n; ++j) s += G[i * n + j] * B[p * n + j];
            (*gA)[i * k + p] += s;
          }
        }
      }
      if (Tensor *gB = t.accumulator(ib)) {
        for (size_t i = 0; i < m; ++i) {
          for (size_t p = 0; p < k; ++p) {
            const double av = A[i * k + p];
            for (size_t j = 0; j < n; ++j) (*gB)[p * n + j] += av * G[i * n + j];
          }
        }
      }
    });
  }
  if (A.rank() == 2 && B.rank() == 1) {
    const size_t m = A.dim(0), k = A.dim(1);
    if (B.dim(0) != k) shape_error("matmul", A.shape(), B.shape());
    Tensor y(Shape{m});
    for (size_t i = 0; i < m; ++i) {
      double s = 0;
      for (size_t p = 0; p < k; ++p) s += A[i * k + p] * B[p];
      y[i] = s;
    }
    return tape.record(std::move(y), {a, b}, [ia, ib, m, k](Tape &t, uint32_t self) {
      const Tensor &g = t.grad(self);
      const Tensor &A = t.value(ia);
      const Tensor &x = t.value(ib);
      if (Tensor *gA = t.accumulator(ia)) {
        for (size_t i = 0; i < m; ++i) {
          for (size_t p = 0; p < k; ++p) (*gA)[i * k + p] += g[i] * x[p];
        }
      }
      if (Tensor *gx = t.accumulator(ib)) {
        for (size_t i = 0; i < m; ++i) {
          for (size_t p = 0; p < k; ++p) (*gx)[p] += A[i * k + p] * g[i];
        }
      }
    });
  }
  if (A.rank() == 1 && B.rank() == 2) {
    const size_t k = A.dim(0), n = B.dim(1);
    if (B.dim(0) != k) shape_error("matmul", A.shape(), B.shape());
    Tensor y(Shape{n});
    for (size_t p = 0; p < k; ++p) {
      for (size_t j = 0; j < n; ++j) y[j] += A[p] * B[p * n + j];
    }
    return tape.record(std::move(y), {a, b}, [ia, ib, k, n](Tape &t, uint32_t self) {
      const Tensor &g = t.grad(self);
      const Tensor &x = t.value(ia);
      const Tensor &B = t.value(ib);
      if (Tensor *gx = t.accumulator(ia)) {
        for (size_t p = 0; p < k; ++p) {
          double s = 0;
          for (size_t j = 0; j < n; ++j) s += B[p * n + j] * g[j];
          (*gx)[p] += s;
        }
      }
      if (Tensor *gB = t.accumulator(ib)) {
        for (size_t p = 0; p < k; ++p) {
          for (size_t j = 0; j < n; ++j) (*gB)[p * n + j] += x[p] * g[j];
        }
      }
    });
  }
  if (A.rank() == 1 && B.rank() == 1) {
    if (A.dim(0) != B.dim(0)) shape_error("matmul", A.shape(), B.shape());
    double s = 0;
    for (size_t i = 0; i < A.size(); ++i) s += A[i] * B[i];
    return tape.record(Tensor::scalar(s), {a, b}, [ia, ib](Tape &t, uint32_t self) {
      const double g = t.grad(self)[0];
      const Tensor &x = t.value(ia);
      const Tensor &y = t.value(ib);
      if (Tensor *gx = t.accumulator(ia)) {
        for (size_t i = 0; i < x.size(); ++i) (*gx)[i] += g * y[i];
      }
      if (Tensor *gy = t.accumulator(ib)) {
        for (size_t i = 0; i < y.size(); ++i) (*gy)[i] += g * x[i];
      }
    });
  }
  shape_error("matmul", A.shape(), B.shape());
}

Var transpose(Var a) {
  const Tensor &A = a.value();
  if (A.rank() != 2) shape_error("transpose", A.shape());
  const size_t m = A.dim(0), n = A.dim(1);
  Tensor T(Shape{n, m});
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) T[j * m + i] = A[i * n + j];
  }
  uint32_t ia = a.id();
  return a.tape().record(std::move(T), {a}, [ia, m, n](Tape &t, uint32_t self) {
    const Tensor &G = t.grad(self);
    Tensor *gA = t.accumulator(ia);
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < n; ++j) (*gA)[i * n + j] += G[j * m + i];
    }
  });
}

Var add(Var a, Var b) {
  Tape &tape = same_tape(a, b);
  const Tensor &A = a.value();
  const Tensor &B = b.value();
  const uint32_t ia = a.id(), ib = b.id();
  if (A.shape() == B.shape()) {
    Tensor C(A.shape());
    for (size_t i = 0; i < C.size(); ++i) C[i] = A[i] + B[i];
    return tape.record(std::move(C), {a, b}, [ia, ib](Tape &t, uint32_t self) {
      const Tensor &g = t.grad(self);
      if (Tensor *ga = t.accumulator(ia)) {
        for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
      }
      if (Tensor *gb = t.accumulator(ib)) {
        for (size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i];
      }
    });
  }
  if (A.rank() == 2 && B.rank() == 1 && A.dim(1) == B.dim(0)) {
    const size_t m = A.dim(0), n = A.dim(1);
    Tensor C(A.shape());
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < n; ++j) C[i * n + j] = A[i * n + j] + B[j];
    }
    return tape.record(std::move(C), {a, b}, [ia, ib, m, n](Tape &t, uint32_t self) {
      const Tensor &g = t.grad(self);
      if (Tensor *ga = t.accumulator(ia)) {
        for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
      }
      if (Tensor *gb = t.accumulator(ib)) {
        for (size_t i = 0; i < m; ++i) {
          for (size_t j = 0; j < n; ++j) (*gb)[j] += g[i * n + j];
        }
      }
    });
  }
  shape_error("add", A.shape(), B.shape());
}

Var sub(Var a, Var b) {
  Tape &tape = same_tape(a, b);
  const Tensor &A = a.value();
  const Tensor &B = b.value();
  if (!(A.shape() == B.shape())) shape_error("sub", A.shape(), B.shape());
  Tensor C(A.shape());
  for (size_t i = 0; i < C.size(); ++i) C[i] = A[i] - B[i];
  const uint32_t ia = a.id(), ib = b.id();
  return tape.record(std::move(C), {a, b}, [ia, ib](Tape &t, uint32_t self) {
    const Tensor &g = t.grad(self);
    if (Tensor *ga = t.accumulator(ia)) {
      for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
    }
    if (Tensor *gb = t.accumulator(ib)) {
      for (size_t i = 0; i < g.size(); ++i) (*gb)[i] -= g[i];
    }
  });
}

Var mul(Var a, Var b) {
  Tape &tape = same_tape(a, b);
  const Tensor &A = a.value();
  const Tensor &B = b.value();
  if (!(A.shape() == B.shape())) shape_error("mul", A.shape(), B.shape());
  Tensor C(A.shape());
  for (size_t i = 0; i < C.size(); ++i) C[i] = A[i] * B[i];
  const uint32_t ia = a.id(), ib = b.id();
  return tape.record(std::move(C), {a, b}, [ia, ib](Tape &t, uint32_t self) {
    const Tensor &g = t.grad(self);
    const Tensor &A = t.value(ia);
    const Tensor &B = t.value(ib);
    if (Tensor *ga = t.accumulator(ia)) {
      for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * B[i];
    }
    if (Tensor *gb = t.accumulator(ib)) {
      for (size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * A[i];
    }
  });
}

Var scale(Var a, double c) {
  return unary(a, [c](double x) { return c * x; }, [c](double, double) { return c; });
}

Var one_minus(Var a) {
  return unary(a, [](double x) { return 1.0 - x; }, [](double, double) { return -1.0; });
}

Var sigmoid(Var a) {
  return unary(a, stable_sigmoid, [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var a) {
  return unary(a, [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var a) {
  return unary(a, [](double x) { return x > 0 ? x : 0.0; },
               [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

namespace {

void rows_and_width(const Shape &s, const char *op, size_t *rows, size_t *width) {
  if (s.rank() == 1) {
    *rows = 1;
    *width = s[0];
  } else if (s.rank() == 2) {
    *rows = s[0];
    *width = s[1];
  } else {
    shape_error(op, s);
  }
}

}  // namespace

Var softmax(Var a) {
  const Tensor &X = a.value();
  size_t rows = 0, width = 0;
  rows_and_width(X.shape(), "softmax", &rows, &width);
  Tensor Y(X.shape());
  for (size_t r = 0; r < rows; ++r) {
    const double *x = &X.data()[r * width];
    double *y = &Y.data()[r * width];
    double mx = *std::max_element(x, x + width);
    double z = 0;
    for (size_t j = 0; j < width; ++j) z += (y[j] = std::exp(x[j] - mx));
    for (size_t j = 0; j < width; ++j) y[j] /= z;
  }
  uint32_t ia = a.id();
  return a.tape().record(std::move(Y), {a}, [ia, rows, width](Tape &t, uint32_t self) {
    const Tensor &G = t.grad(self);
    const Tensor &Y = t.value(self);
    Tensor *gA = t.accumulator(ia);
    for (size_t r = 0; r < rows; ++r) {
      double dot = 0;
      for (size_t j = 0; j < width; ++j) dot += G[r * width + j] * Y[r * width + j];
      for (size_t j = 0; j < width; ++j) {
        (*gA)[r * width + j] += Y[r * width + j] * (G[r * width + j] - dot);
      }
    }
  });
}

Var log_softmax(Var a) {
  const Tensor &X = a.value();
  size_t rows = 0, width = 0;
  rows_and_width(X.shape(), "log_softmax", &rows, &width);
  Tensor Y(X.shape());
  for (size_t r = 0; r < rows; ++r) {
    const double *x = &X.data()[r * width];
    double mx = *std::max_element(x, x + width);
    double z = 0;
    for (size_t j = 0; j < width; ++j) z += std::exp(x[j] - mx);
    double lse = mx + std::log(z);
    for (size_t j = 0; j < width; ++j) Y[r * width + j] = x[j] - lse;
  }
  uint32_t ia = a.id();
  return a.tape().record(std::move(Y), {a}, [ia, rows, width](Tape &t, uint32_t self) {
    const Tensor &G = t.grad(self);
    const Tensor &Y = t.value(self);
    Tensor *gA = t.accumulator(ia);
    for (size_t r = 0; r < rows; ++r) {
      double gsum = 0;
      for (size_t j = 0; j < width; ++j) gsum += G[r * width + j];
      for (size_t j = 0; j < width; ++j) {
        (*gA)[r * width + j] += G[r * width + j] - std::exp(Y[r * width + j]) * gsum;
      }
    }
  });
}

Var concat(std::span<const Var> parts, size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const Shape &first = parts[0].shape();
  if (axis >= first.rank()) shape_error("concat", first);
  size_t outer = 1, inner = 1;
  for (size_t d = 0; d < axis; ++d) outer *= first[d];
  for (size_t d = axis + 1; d < first.rank(); ++d) inner *= first[d];
  size_t total_axis = 0;
  std::vector<size_t> widths;
  std::vector<uint32_t> ids;
  for (const Var &p : parts) {
    same_tape(parts[0], p);
    const Shape &s = p.shape();
    if (s.rank() != first.rank()) shape_error("concat", first, s);
    for (size_t d = 0; d < s.rank(); ++d) {
      if (d != axis && s[d] != first[d]) shape_error("concat", first, s);
    }
    widths.push_back(s[axis] * inner);
    total_axis += s[axis];
    ids.push_back(p.id());
  }
  std::vector<size_t> dims = first.dims();
  dims[axis] = total_axis;
  Tensor out{Shape(std::span<const size_t>(dims))};
  const size_t out_row = total_axis * inner;
  size_t col = 0;
  for (size_t p = 0; p < parts.size(); ++p) {
    const Tensor &v = parts[p].value();
    for (size_t o = 0; o < outer; ++o) {
      std::copy_n(&v.data()[o * widths[p]], widths[p], &out.data()[o * out_row + col]);
    }
    col += widths[p];
  }
  return parts[0].tape().record(
      std::move(out), parts,
      [ids = std::move(ids), widths = std::move(widths), outer, out_row](Tape &t,
                                                                         uint32_t self) {
        const Tensor &G = t.grad(self);
        size_t col = 0;
        for (size_t p = 0; p < ids.size(); ++p) {
          if (Tensor *g = t.accumulator(ids[p])) {
            for (size_t o = 0; o < outer; ++o) {
              for (size_t j = 0; j < widths[p]; ++j) {
                (*g)[o * widths[p] + j] += G[o * out_row + col + j];
              }
            }
          }
          col += widths[p];
        }
      });
}

Var concat(std::initializer_list<Var> parts, size_t axis) {
  return concat(std::span<const Var>(parts.begin(), parts.size()), axis);
}

Var stack(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("stack: no inputs");
  const Shape &first = parts[0].shape();
  if (first.rank() >= Shape::kMaxRank) shape_error("stack", first);
  std::vector<size_t> dims{parts.size()};
  for (size_t d : first.dims()) dims.push_back(d);
  const size_t n = first.numel();
  Tensor out{Shape(std::span<const size_t>(dims))};
  std::vector<uint32_t> ids;
  for (size_t p = 0; p < parts.size(); ++p) {
    same_tape(parts[0], parts[p]);
    if (!(parts[p].shape() == first)) shape_error("stack", first, parts[p].shape());
    std::copy_n(parts[p].value().data().data(), n, &out.data()[p * n]);
    ids.push_back(parts[p].id());
  }
  return parts[0].tape().record(std::move(out), parts,
                                [ids = std::move(ids), n](Tape &t, uint32_t self) {
                                  const Tensor &G = t.grad(self);
                                  for (size_t p = 0; p < ids.size(); ++p) {
                                    if (Tensor *g = t.accumulator(ids[p])) {
                                      for (size_t j = 0; j < n; ++j) (*g)[j] += G[p * n + j];
                                    }
                                  }
                                });
}

Var reshape(Var a, Shape shape) {
  if (shape.numel() != a.value().size()) shape_error("reshape", a.shape(), shape);
  Tensor out(shape, a.value().values());
  uint32_t ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia](Tape &t, uint32_t self) {
    const Tensor &G = t.grad(self);
    Tensor *g = t.accumulator(ia);
    for (size_t i = 0; i < G.size(); ++i) (*g)[i] += G[i];
  });
}

Var row(Var a, size_t i) {
  const Tensor &A = a.value();
  if (A.rank() != 2 || i >= A.dim(0)) {
    throw ShapeError("row: index " + std::to_string(i) + " out of range for " +
                     A.shape().str());
  }
  const size_t n = A.dim(1);
  Tensor out(Shape{n}, std::vector<double>(A.data().begin() + i * n,
                                           A.data().begin() + (i + 1) * n));
  uint32_t ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia, i, n](Tape &t, uint32_t self) {
    const Tensor &G = t.grad(self);
    Tensor *g = t.accumulator(ia);
    for (size_t j = 0; j < n; ++j) (*g)[i * n + j] += G[j];
  });
}

Var pad2d(Var a, size_t rows, size_t cols) {
  const Tensor &A = a.value();
  if (A.rank() != 2 || A.dim(0) > rows || A.dim(1) > cols) {
    shape_error("pad2d", A.shape(), Shape{rows, cols});
  }
  const size_t m = A.dim(0), n = A.dim(1);
  Tensor out(Shape{rows, cols});
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) out[i * cols + j] = A[i * n + j];
  }
  uint32_t ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia, m, n, cols](Tape &t, uint32_t self) {
    const Tensor &G = t.grad(self);
    Tensor *g = t.accumulator(ia);
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < n; ++j) (*g)[i * n + j] += G[i * cols + j];
    }
  });
}

Var conv2d(Var input, Var filters, Var bias) {
  same_tape(input, filters);
  same_tape(input, bias);
  const Tensor &X = input.value();
  const Tensor &W = filters.value();
  const Tensor &B = bias.value();
  if (X.rank() != 3 || W.rank() != 4 || W.dim(1) != X.dim(0)) {
    shape_error("conv2d", X.shape(), W.shape());
  }
  if (B.rank() != 1 || B.dim(0) != W.dim(0)) shape_error("conv2d", W.shape(), B.shape());
  const size_t C = X.dim(0), H = X.dim(1), Wd = X.dim(2);
  const size_t F = W.dim(0), KH = W.dim(2), KW = W.dim(3);
  if (KH > H || KW > Wd) shape_error("conv2d", X.shape(), W.shape());
  const size_t OH = H - KH + 1, OW = Wd - KW + 1;
  Tensor Y(Shape{F, OH, OW});
  for (size_t f = 0; f < F; ++f) {
    for (size_t oy = 0; oy < OH; ++oy) {
      for (size_t ox = 0; ox < OW; ++ox) {
        double s = B[f];
        for (size_t c = 0; c < C; ++c) {
          for (size_t ky = 0; ky < KH; ++ky) {
            for (size_t kx = 0; kx < KW; ++kx) {
              s += W[((f * C + c) * KH + ky) * KW + kx] *
                   X[(c * H + oy + ky) * Wd + ox + kx];
            }
          }
        }
        Y[(f * OH + oy) * OW + ox] = s;
      }
    }
  }
  const uint32_t ix = input.id(), iw = filters.id(), ib = bias.id();
  return input.tape().record(
      std::move(Y), {input, filters, bias},
      [ix, iw, ib, C, H, Wd, F, KH, KW, OH, OW](Tape &t, uint32_t self) {
        const Tensor &G = t.grad(self);
        const Tensor &X = t.value(ix);
        const Tensor &W = t.value(iw);
        Tensor *gX = t.accumulator(ix);
        Tensor *gW = t.accumulator(iw);
        Tensor *gB = t.accumulator(ib);
        for (size_t f = 0; f < F; ++f) {
          for (size_t oy = 0; oy < OH; ++oy) {
            for (size_t ox = 0; ox < OW; ++ox) {
              const double g = G[(f * OH + oy) * OW + ox];
              if (g == 0.0) continue;
              if (gB) (*gB)[f] += g;
              for (size_t c = 0; c < C; ++c) {
                for (size_t ky = 0; ky < KH; ++ky) {
                  for (size_t kx = 0; kx < KW; ++kx) {
                    const size_t wi = ((f * C + c) * KH + ky) * KW + kx;
                    const size_t xi = (c * H + oy + ky) * Wd + ox + kx;
                    if (gW) (*gW)[wi] += g * X[xi];
                    if (gX) (*gX)[xi] += g * W[wi];
                  }
                }
              }
            }
          }
        }
      });
}

Var maxpool2d(Var input, size_t window, size_t stride) {
  const Tensor &X = input.value();
  if (X.rank() != 3 || window == 0 || stride == 0 || X.dim(1) < window ||
      X.dim(2) < window) {
    shape_error("maxpool2d", X.shape());
  }
  const size_t C = X.dim(0), H = X.dim(1), W = X.dim(2);
  const size_t OH = (H - window) / stride + 1, OW = (W - window) / stride + 1;
  Tensor Y(Shape{C, OH, OW});
  std::vector<uint32_t> argmax(Y.size());
  for (size_t c = 0; c < C; ++c) {
    for (size_t oy = 0; oy < OH; ++oy) {
      for (size_t ox = 0; ox < OW; ++ox) {
        double best = -std::numeric_limits<double>::infinity();
        size_t best_i = 0;
        for (size_t ky = 0; ky < window; ++ky) {
          for (size_t kx = 0; kx < window; ++kx) {
            size_t xi = (c * H + oy * stride + ky) * W + ox * stride + kx;
            if (X[xi] > best) {
              best = X[xi];
              best_i = xi;
            }
          }
        }
        const size_t yi = (c * OH + oy) * OW + ox;
        Y[yi] = best;
        argmax[yi] = static_cast<uint32_t>(best_i);
      }
    }
  }
  uint32_t ix = input.id();
  return input.tape().record(std::move(Y), {input},
                             [ix, argmax = std::move(argmax)](Tape &t, uint32_t self) {
                               const Tensor &G = t.grad(self);
                               Tensor *g = t.accumulator(ix);
                               for (size_t i = 0; i < G.size(); ++i) (*g)[argmax[i]] += G[i];
                             });
}

Var sum(Var a) {
  double s = 0;
  for (double v : a.value().data()) s += v;
  uint32_t ia = a.id();
  return a.tape().record(Tensor::scalar(s), {a}, [ia](Tape &t, uint32_t self) {
    const double g = t.grad(self)[0];
    Tensor *ga = t.accumulator(ia);
    for (double &v : ga->data()) v += g;
  });
}

Var mean(Var a) {
  const double n = static_cast<double>(a.value().size());
  double s = 0;
  for (double v : a.value().data()) s += v;
  uint32_t ia = a.id();
  return a.tape().record(Tensor::scalar(s / n), {a}, [ia, n](Tape &t, uint32_t self) {
    const double g = t.grad(self)[0] / n;
    Tensor *ga = t.accumulator(ia);
    for (double &v : ga->data()) v += g;
  });
}

Var embedding_lookup(Var table, std::span<const int> ids) {
  const Tensor &E = table.value();
  if (E.rank() != 2) shape_error("embedding_lookup", E.shape());
  if (ids.empty()) throw ShapeError("embedding_lookup: empty id list");
  const size_t V = E.dim(0), D = E.dim(1);
  Tensor out(Shape{ids.size(), D});
  for (size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] < 0 || static_cast<size_t>(ids[t]) >= V) {
      throw DataError("token id " + std::to_string(ids[t]) + " outside vocabulary of " +
                      std::to_string(V));
    }
    std::copy_n(&E.data()[static_cast<size_t>(ids[t]) * D], D, &out.data()[t * D]);
  }
  uint32_t ie = table.id();
  return table.tape().record(
      std::move(out), {table},
      [ie, D, ids = std::vector<int>(ids.begin(), ids.end())](Tape &t, uint32_t self) {
        const Tensor &G = t.grad(self);
        Tensor *g = t.accumulator(ie);
        for (size_t r = 0; r < ids.size(); ++r) {
          const size_t base = static_cast<size_t>(ids[r]) * D;
          for (size_t j = 0; j < D; ++j) (*g)[base + j] += G[r * D + j];
        }
      });
}

Var bce_with_logits(Var logit, double label) {
  const Tensor &X = logit.value();
  if (X.size() != 1) shape_error("bce_with_logits", X.shape());
  const double x = X[0];
  const double loss = std::max(x, 0.0) - x * label + std::log1p(std::exp(-std::abs(x)));
  uint32_t ix = logit.id();
  return logit.tape().record(Tensor::scalar(loss), {logit},
                             [ix, label](Tape &t, uint32_t self) {
                               const double g = t.grad(self)[0];
                               Tensor *gx = t.accumulator(ix);
                               (*gx)[0] += g * (stable_sigmoid(t.value(ix)[0]) - label);
                             });
}

Var cross_entropy(Var logits, size_t target) {
  const Tensor &X = logits.value();
  if (X.rank() != 1 || target >= X.size()) shape_error("cross_entropy", X.shape());
  double mx = *std::max_element(X.data().begin(), X.data().end());
  double z = 0;
  for (double v : X.data()) z += std::exp(v - mx);
  const double lse = mx + std::log(z);
  uint32_t ix = logits.id();
  return logits.tape().record(
      Tensor::scalar(lse - X[target]), {logits}, [ix, target, lse](Tape &t, uint32_t self) {
        const double g = t.grad(self)[0];
        const Tensor &X = t.value(ix);
        Tensor *gx = t.accumulator(ix);
        for (size_t j = 0; j < X.size(); ++j) {
          (*gx)[j] += g * (std::exp(X[j] - lse) - (j == target ? 1.0 : 0.0));
        }
      });
}

}  // namespace docbot::nn
