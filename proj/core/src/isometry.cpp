#include "hilbert/isometry.hpp"

#include "hilbert/error.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace hilbert {

std::string_view to_string(IsometryKind kind) {
  switch (kind) {
    case IsometryKind::Elliptic: return "Elliptic";
    case IsometryKind::Parabolic: return "Parabolic";
    case IsometryKind::Hyperbolic: return "Hyperbolic";
  }
  return "?";
}

namespace {

constexpr double kBoundaryBand = 1e-7;

bool is_positive_real(const std::complex<double>& z) { return z.imag() == 0.0 && z.real() > 0.0; }

// Rows of M (normalized) must be permuted by the right action of A, up to one global sign.
bool permutes_rows(const Mat& M, const Mat& A) {
  Mat R = M;
  for (Eigen::Index i = 0; i < R.rows(); ++i) R.row(i).normalize();
  std::vector<bool> used(static_cast<size_t>(R.rows()), false);
  int sign = 0;
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    Vec g = (R.row(i) * A).transpose();
    const double n = g.norm();
    if (!(n > 0)) return false;
    g /= n;
    bool found = false;
    for (Eigen::Index j = 0; j < R.rows() && !found; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      for (int s : {1, -1}) {
        if (sign != 0 && s != sign) continue;
        if ((g - s * R.row(j).transpose()).norm() <= 1e-9) {
          used[static_cast<size_t>(j)] = true;
          sign = s;
          found = true;
          break;
        }
      }
    }
    if (!found) return false;
  }
  return true;
}

Mat eigenspace(const Mat& B, double lambda, double spread) {
  const Eigen::Index N = B.rows();
  return null_space(B - lambda * Mat::Identity(N, N), std::max(1e-9, 100.0 * spread));
}

// Spectral projector onto ker(B − λ) when λ is semisimple, else nullopt.
std::optional<Mat> eigen_projector(const Mat& B, double lambda, double spread) {
  const Eigen::Index N = B.rows();
  const Mat K = eigenspace(B, lambda, spread);
  const Mat L = null_space((B - lambda * Mat::Identity(N, N)).transpose(), std::max(1e-9, 100.0 * spread));
  if (K.cols() == 0 || K.cols() != L.cols()) return std::nullopt;
  const Mat G = L.transpose() * K;
  Eigen::JacobiSVD<Mat> svd(G);
  const Vec s = svd.singularValues();
  if (s(s.size() - 1) <= 1e-9 * std::max(1.0, s(0))) return std::nullopt;
  return Mat(K * G.inverse() * L.transpose());
}

std::optional<Vec> closure_point(const ConvexBody& body, const Vec& X) {
  if (locate(body, X, kBoundaryBand) == Location::Exterior) return std::nullopt;
  return body.normalize(X);
}

void add_unique(std::vector<ProjPoint>& pts, const Vec& X) {
  const ProjPoint p(X);
  for (const auto& q : pts)
    if (q.approx_equal(p, 1e-9)) return;
  pts.push_back(p);
}

Vec top_eigenvector(const ConvexBody& body, const Mat& B, const EigenCluster& c) {
  const Mat K = eigenspace(B, c.value.real(), c.spread);
  if (K.cols() != 1) throw Error(ErrorCode::DegeneratePencil, "extreme eigenvalue is not simple");
  Vec v = K.col(0);
  if (auto p = closure_point(body, v)) return *p;
  if (auto p = closure_point(body, -v)) return *p;
  throw Error(ErrorCode::NumericalFailure, "extreme eigenvector misses the closure");
}

}  // namespace

Mat cone_normalized(const ConvexBody& body, const ProjMap& A) {
  if (A.size() != body.size()) throw Error(ErrorCode::InvalidInput, "map dimension does not match the body");
  const double s = body.patch().dot(A.matrix() * body.witness());
  if (s == 0.0) throw Error(ErrorCode::NotAnIsometry, "map sends the witness to infinity");
  return s > 0 ? A.matrix() : Mat(-A.matrix());
}

bool preserves(const ConvexBody& body, const ProjMap& A, int samples, std::uint64_t seed) {
  if (A.size() != body.size()) throw Error(ErrorCode::InvalidInput, "map dimension does not match the body");
  const Mat& M = A.matrix();
  if (const auto& Q = body.quadratic_form()) {
    const Mat T = M.transpose() * (*Q) * M;
    const double c = T.cwiseProduct(*Q).sum() / Q->squaredNorm();
    return c > 0 && (T - c * (*Q)).norm() <= 1e-9 * std::max(1.0, M.squaredNorm()) * Q->norm();
  }
  if (const auto& F = body.facets()) return permutes_rows(*F, M);
  if (const auto& V = body.vertices()) return permutes_rows(V->transpose(), M.transpose());
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vec X = sample_interior(body, rng);
    if (locate(body, M * X, body.tolerances().boundary_band) != Location::Interior) return false;
    const Vec b = sample_boundary(body, rng);
    if (locate(body, M * b, kBoundaryBand) != Location::Boundary) return false;
  }
  return true;
}

double displacement_at(const ConvexBody& body, const Mat& A, const Vec& X) {
  const auto Y = body.normalize(A * X);
  if (!Y) throw Error(ErrorCode::NotInterior, "image point is at infinity");
  return hilbert_distance(body, X, *Y);
}

IsometryClassification classify(const ConvexBody& body, const ProjMap& A, const IsometryOptions& opts) {
  if (!preserves(body, A, opts.preserve_samples, opts.seed))
    throw Error(ErrorCode::NotAnIsometry, "map does not preserve the body");
  const Mat B = cone_normalized(body, A);
  IsometryClassification out;
  IsometryCertificate& cert = out.certificate;
  cert.spectrum = spectrum(B);
  cert.unit_band = opts.unit_band;
  double mmax = 0.0, mmin = std::numeric_limits<double>::infinity();
  bool unit = true;
  for (const auto& c : cert.spectrum.eigenvalues) {
    const double m = std::abs(c.value);
    for (int i = 0; i < c.multiplicity; ++i) {
      cert.eigenvalues.push_back(c.value);
      cert.moduli.push_back(m);
    }
    mmax = std::max(mmax, m);
    mmin = std::min(mmin, m);
    if (std::abs(m - 1.0) > opts.unit_band) unit = false;
  }

  // fixed sets and interior fixed points
  for (const auto& c : cert.spectrum.eigenvalues) {
    if (!is_positive_real(c.value)) continue;
    const double lam = c.value.real();
    FixedSet fs;
    fs.eigenvalue = lam;
    const Mat K = eigenspace(B, lam, c.spread);
    const auto P = eigen_projector(B, lam, c.spread);
    std::vector<Vec> candidates;
    if (P) candidates.push_back(*P * body.witness());
    for (Eigen::Index j = 0; j < K.cols(); ++j) {
      candidates.push_back(K.col(j));
      candidates.push_back(-K.col(j));
    }
    for (const auto& X : candidates) {
      const auto Xn = closure_point(body, X);
      if (!Xn) continue;
      add_unique(fs.points, *Xn);
      if (unit && !cert.interior_fixed_point &&
          locate(body, *Xn, body.tolerances().boundary_band) == Location::Interior) {
        const double r = displacement_at(body, B, *Xn);
        if (r <= 1e-8) {
          cert.interior_fixed_point = *Xn;
          cert.fixed_residual = r;
        }
      }
    }
    if (!fs.points.empty()) out.fixed_sets.push_back(std::move(fs));
  }

  if (cert.interior_fixed_point) {
    out.kind = IsometryKind::Elliptic;
    out.translation_length = 0.0;
  } else if (!unit) {
    out.kind = IsometryKind::Hyperbolic;
    out.translation_length = std::log(mmax / mmin);
  } else {
    out.kind = IsometryKind::Parabolic;
    out.translation_length = 0.0;
  }

  if (out.kind == IsometryKind::Hyperbolic) {
    const auto& top = cert.spectrum.eigenvalues.front();
    const auto& bot = cert.spectrum.eigenvalues.back();
    if (is_positive_real(top.value) && is_positive_real(bot.value) && top.multiplicity == 1 &&
        bot.multiplicity == 1) {
      try {
        const Vec Pp = top_eigenvector(body, B, top);
        const Vec Pm = top_eigenvector(body, B, bot);
        const Vec mid = 0.5 * (Pp + Pm);
        if (locate(body, mid, body.tolerances().boundary_band) == Location::Interior) {
          Chord ax;
          ax.base = mid;
          const Vec D = Pp - Pm;
          const double L = D.norm();
          ax.direction = D / L;
          ax.t_minus = -0.5 * L;
          ax.t_plus = 0.5 * L;
          ax.x_minus = ProjPoint(Pm);
          ax.x_plus = ProjPoint(Pp);
          out.axis = ax;
        }
      } catch (const Error&) {
      }
    }
  }
  return out;
}

TranslationEstimate empirical_translation_length(const ConvexBody& body, const ProjMap& A, long budget,
                                                 std::uint64_t seed) {
  if (budget < 1) throw Error(ErrorCode::InvalidInput, "budget must be positive");
  if (!preserves(body, A)) throw Error(ErrorCode::NotAnIsometry, "map does not preserve the body");
  const Mat B = cone_normalized(body, A);
  Rng rng(seed);
  TranslationEstimate out;
  out.estimate = std::numeric_limits<double>::infinity();
  long next_checkpoint = 1;
  auto record = [&](double f, const Vec& X) {
    ++out.evaluations;
    if (f < out.estimate) {
      out.estimate = f;
      out.argmin = X;
    }
    if (out.evaluations == next_checkpoint || out.evaluations == budget) {
      out.checkpoints.push_back(out.evaluations);
      out.history.push_back(out.estimate);
      next_checkpoint *= 2;
    }
  };

  constexpr long kStarts = 64;
  for (long i = 0; i < kStarts && out.evaluations < budget; ++i) {
    const Vec X = sample_interior(body, rng);
    record(displacement_at(body, B, X), X);
  }
  if (out.evaluations >= budget) return out;

  // pattern search in chart coordinates, expanding on success
  const int n = body.dim();
  Vec y = body.to_chart(out.argmin);
  double fy = out.estimate;
  double step = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    const Interval I = body.cone_interval(out.argmin, body.chart_basis() * e);
    step = std::min(step, 0.1 * (std::min(I.hi, 1e3) - std::max(I.lo, -1e3)));
  }
  int last = 0;
  while (out.evaluations < budget && step > 1e-15) {
    bool improved = false;
    for (int k = 0; k < 2 * n && out.evaluations < budget; ++k) {
      const int d = (last + k) % (2 * n);
      Vec yt = y;
      yt(d / 2) += (d % 2 == 0 ? step : -step);
      const Vec X = body.from_chart(yt);
      double f = std::numeric_limits<double>::infinity();
      if (locate(body, X, 0.0) == Location::Interior) f = displacement_at(body, B, X);
      record(f, X);
      if (f < fy) {
        y = yt;
        fy = f;
        last = d;
        improved = true;
        break;
      }
    }
    step *= improved ? 2.0 : 0.5;
  }
  return out;
}

JnfReport parabolic_jnf_check(const ProjMap& A, double unit_band) {
  const Spectrum sp = spectrum(A);
  JnfReport r;
  r.consistent = sp.consistent;
  for (const auto& c : sp.eigenvalues) {
    if (std::abs(std::abs(c.value) - 1.0) > unit_band)
      throw Error(ErrorCode::NotUnitModulus, "eigenvalue modulus differs from 1");
    r.rows.push_back({c.value, c.multiplicity, c.max_block, c.block_sizes});
    r.max_index = std::max(r.max_index, c.max_block);
  }
  auto find = [&](double v) -> const JnfRow* {
    for (const auto& row : r.rows)
      if (std::abs(row.value - std::complex<double>(v, 0.0)) <= unit_band) return &row;
    return nullptr;
  };
  const JnfRow* one = find(1.0);
  const JnfRow* minus = find(-1.0);
  if (!(one && one->index == r.max_index) && minus && minus->index == r.max_index && !one) {
    one = minus;
    r.negated = true;
  }
  if (one) {
    r.index_one = one->index;
    r.one_attains_max = one->index == r.max_index;
  }
  r.odd = r.index_one % 2 == 1;
  r.pass = r.one_attains_max && r.odd && r.index_one >= 3;
  const int N = A.size();
  if (N == 3 || N == 4) {
    bool ok = one && one->blocks.front() == 3 && std::count(one->blocks.begin(), one->blocks.end(), 3) == 1;
    for (const auto& row : r.rows) {
      if (&row == one) continue;
      const bool real_unit = row.value.imag() == 0.0;
      if (row.index != 1 || !real_unit) ok = false;
    }
    if (one && N == 3 && one->multiplicity != 3) ok = false;
    r.o_n1_conditions = ok;
  }
  return r;
}

Pencil invariant_pencil(const ConvexBody& body, const ProjMap& A, int fibers) {
  const IsometryClassification cls = classify(body, A);
  if (cls.kind != IsometryKind::Hyperbolic) throw Error(ErrorCode::NotHyperbolic, "map is not hyperbolic");
  const Mat B = cone_normalized(body, A);
  const auto& sp = cls.certificate.spectrum;
  const auto& top = sp.eigenvalues.front();
  const auto& bot = sp.eigenvalues.back();
  if (!is_positive_real(top.value) || !is_positive_real(bot.value) || top.multiplicity != 1 ||
      bot.multiplicity != 1)
    throw Error(ErrorCode::DegeneratePencil, "extreme eigenvalues are not simple and positive");
  const int N = body.size();
  Pencil out;
  const Vec Pp = top_eigenvector(body, B, top);
  const Vec Pm = top_eigenvector(body, B, bot);
  out.p_plus = ProjPoint(Pp);
  out.p_minus = ProjPoint(Pm);
  auto left = [&](const EigenCluster& c) {
    const Mat K = null_space((B - c.value.real() * Mat::Identity(N, N)).transpose(), std::max(1e-9, 100.0 * c.spread));
    if (K.cols() != 1) throw Error(ErrorCode::DegeneratePencil, "left eigenspace is not a line");
    Vec h = K.col(0);
    if (h.dot(body.witness()) < 0) h = -h;
    return h;
  };
  // H_plus vanishes at p_plus: it is the left eigenvector of the smallest eigenvalue
  const Vec Hp = left(bot), Hm = left(top);
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    const Vec b = sample_boundary(body, rng);
    if (Hp.dot(b) < -1e-7 * b.norm() || Hm.dot(b) < -1e-7 * b.norm())
      throw Error(ErrorCode::NotSupporting, "eigen-covector does not support the body");
  }
  if (std::min((Hp - Hm).norm(), (Hp + Hm).norm()) <= 1e-9)
    throw Error(ErrorCode::DegeneratePencil, "supporting hyperplanes at the fixed points coincide");
  out.H_plus = ProjHyperplane(Hp);
  out.H_minus = ProjHyperplane(Hm);
  Mat S(2, N);
  S.row(0) = Hp.transpose();
  S.row(1) = Hm.transpose();
  out.center = null_space(S, 1e-10);
  out.shift = std::log(std::abs(bot.value) / std::abs(top.value));
  const Mat Binv = B.inverse();
  out.no_fixed_fiber = true;
  for (int k = 0; k < fibers; ++k) {
    const double c = std::exp(3.0 * (fibers == 1 ? 0.0 : 2.0 * k / (fibers - 1.0) - 1.0));
    const Vec eta = Hp - c * Hm;
    out.fibers.emplace_back(eta);
    out.params.push_back(c);
    const Vec img = (eta.transpose() * Binv).transpose();
    const Vec a = eta.normalized(), b = img.normalized();
    if (std::min((a - b).norm(), (a + b).norm()) <= 1e-9) out.no_fixed_fiber = false;
  }
  return out;
}

double pencil_coordinate(const Pencil& pencil, const Vec& X) {
  return std::log(pencil.H_plus.covector().dot(X) / pencil.H_minus.covector().dot(X));
}

Vec pencil_projection(const ConvexBody& body, const Pencil& pencil, const Vec& X) {
  const Vec Pp = *body.normalize(pencil.p_plus.coords());
  const Vec Pm = *body.normalize(pencil.p_minus.coords());
  const double c = std::exp(pencil_coordinate(pencil, X));
  const double s = pencil.H_plus.covector().dot(Pm) / (c * pencil.H_minus.covector().dot(Pp));
  return (Pm + s * Pp) / (1.0 + s);
}

nlohmann::json to_json(const IsometryClassification& c) {
  json j;
  std::string kind(to_string(c.kind));
  std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char ch) { return std::tolower(ch); });
  j["kind"] = kind;
  j["t"] = c.translation_length;
  json fs = json::array();
  for (const auto& f : c.fixed_sets) {
    json pts = json::array();
    for (const auto& p : f.points) pts.push_back(to_json(p.canonical()));
    fs.push_back({{"eigenvalue", f.eigenvalue}, {"points", pts}});
  }
  j["fixed_sets"] = fs;
  if (c.axis) j["axis"] = {{"x_minus", to_json(c.axis->x_minus.canonical())}, {"x_plus", to_json(c.axis->x_plus.canonical())}};
  json blocks = json::array();
  for (const auto& e : c.certificate.spectrum.eigenvalues)
    blocks.push_back({{"value", {e.value.real(), e.value.imag()}}, {"multiplicity", e.multiplicity},
                      {"blocks", e.block_sizes}});
  json cert;
  cert["moduli"] = c.certificate.moduli;
  cert["blocks"] = blocks;
  cert["unit_band"] = c.certificate.unit_band;
  cert["power"] = {c.certificate.spectrum.power.first, c.certificate.spectrum.power.second};
  if (c.certificate.interior_fixed_point) {
    cert["interior_fixed_point"] = to_json(*c.certificate.interior_fixed_point);
    cert["fixed_residual"] = c.certificate.fixed_residual;
  }
  j["certificate"] = cert;
  return j;
}

nlohmann::json to_json(const JnfReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"value", {row.value.real(), row.value.imag()}}, {"multiplicity", row.multiplicity},
                    {"index", row.index}, {"blocks", row.blocks}});
  json j = {{"rows", rows},         {"max_index", r.max_index}, {"index_one", r.index_one},
            {"negated", r.negated}, {"odd", r.odd},             {"pass", r.pass}};
  if (r.o_n1_conditions) j["o_n1_conditions"] = *r.o_n1_conditions;
  return j;
}

}  // namespace hilbert
