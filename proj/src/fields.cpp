#include "pstat/fields.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace pstat {

double ScalarField2D::checked_value(Point2 p) const {
  if (!admissible(p)) {
    std::ostringstream os;
    os << "field '" << id << "': point (" << p.x1 << ", " << p.x2
       << ") is outside the admissible domain";
    throw InadmissiblePointError(os.str());
  }
  return value(p);
}

ScalarField2D constant_field(double c) {
  ScalarField2D f;
  f.id = "const:" + std::to_string(c);
  f.value = [c](Point2) { return c; };
  f.gradient = [](Point2) { return Vec2{0.0, 0.0}; };
  f.hessian = [](Point2) { return SymMat2{}; };
  return f;
}

ScalarField2D affine_field(double a, double b, double c) {
  ScalarField2D f;
  std::ostringstream os;
  os << "affine:" << a << "," << b << "," << c;
  f.id = os.str();
  f.value = [a, b, c](Point2 p) { return a * p.x1 + b * p.x2 + c; };
  f.gradient = [a, b](Point2) { return Vec2{a, b}; };
  f.hessian = [](Point2) { return SymMat2{}; };
  return f;
}

ScalarField2D quadratic_field(double a, double b) {
  ScalarField2D f;
  std::ostringstream os;
  os << "quad:" << a << "," << b;
  f.id = os.str();
  f.value = [a, b](Point2 p) { return a * p.x1 * p.x1 + b * p.x2 * p.x2; };
  f.gradient = [a, b](Point2 p) { return Vec2{2.0 * a * p.x1, 2.0 * b * p.x2}; };
  f.hessian = [a, b](Point2) { return SymMat2{2.0 * a, 0.0, 2.0 * b}; };
  return f;
}

namespace {

ScalarField2D bilinear_field(double c) {
  ScalarField2D f;
  std::ostringstream os;
  os << "bilinear:" << c;
  f.id = os.str();
  f.value = [c](Point2 p) { return c * p.x1 * p.x2; };
  f.gradient = [c](Point2 p) { return Vec2{c * p.x2, c * p.x1}; };
  f.hessian = [c](Point2) { return SymMat2{0.0, c, 0.0}; };
  return f;
}

ScalarField2D cubic_field(double a, double b) {
  ScalarField2D f;
  std::ostringstream os;
  os << "cubic:" << a << "," << b;
  f.id = os.str();
  f.value = [a, b](Point2 p) { return a * p.x1 * p.x1 * p.x1 + b * p.x2 * p.x2 * p.x2; };
  f.gradient = [a, b](Point2 p) {
    return Vec2{3.0 * a * p.x1 * p.x1, 3.0 * b * p.x2 * p.x2};
  };
  f.hessian = [a, b](Point2 p) { return SymMat2{6.0 * a * p.x1, 0.0, 6.0 * b * p.x2}; };
  return f;
}

ScalarField2D quartic_field(double a, double b) {
  ScalarField2D f;
  std::ostringstream os;
  os << "quartic:" << a << "," << b;
  f.id = os.str();
  f.value = [a, b](Point2 p) {
    auto sq = [](double t) { return t * t; };
    return a * sq(p.x1 * p.x1) + b * sq(p.x2 * p.x2);
  };
  f.gradient = [a, b](Point2 p) {
    return Vec2{4.0 * a * p.x1 * p.x1 * p.x1, 4.0 * b * p.x2 * p.x2 * p.x2};
  };
  f.hessian = [a, b](Point2 p) {
    return SymMat2{12.0 * a * p.x1 * p.x1, 0.0, 12.0 * b * p.x2 * p.x2};
  };
  return f;
}

// x^3 - 3 x y^2, the degree-3 harmonic polynomial Re((x+iy)^3).
ScalarField2D cubic_harmonic_field() {
  ScalarField2D f;
  f.id = "cubic-harmonic";
  f.value = [](Point2 p) { return p.x1 * p.x1 * p.x1 - 3.0 * p.x1 * p.x2 * p.x2; };
  f.gradient = [](Point2 p) {
    return Vec2{3.0 * (p.x1 * p.x1 - p.x2 * p.x2), -6.0 * p.x1 * p.x2};
  };
  f.hessian = [](Point2 p) { return SymMat2{6.0 * p.x1, -6.0 * p.x2, -6.0 * p.x1}; };
  return f;
}

ScalarField2D sinexp_field() {
  ScalarField2D f;
  f.id = "sinexp";
  f.value = [](Point2 p) { return std::sin(p.x1) * std::exp(p.x2); };
  f.gradient = [](Point2 p) {
    const double e = std::exp(p.x2);
    return Vec2{std::cos(p.x1) * e, std::sin(p.x1) * e};
  };
  f.hessian = [](Point2 p) {
    const double e = std::exp(p.x2);
    return SymMat2{-std::sin(p.x1) * e, std::cos(p.x1) * e, std::sin(p.x1) * e};
  };
  return f;
}

ScalarField2D expcos_field() {
  ScalarField2D f;
  f.id = "expcos";
  f.value = [](Point2 p) { return std::exp(p.x1) * std::cos(p.x2); };
  f.gradient = [](Point2 p) {
    const double e = std::exp(p.x1);
    return Vec2{e * std::cos(p.x2), -e * std::sin(p.x2)};
  };
  f.hessian = [](Point2 p) {
    const double e = std::exp(p.x1);
    return SymMat2{e * std::cos(p.x2), -e * std::sin(p.x2), -e * std::cos(p.x2)};
  };
  return f;
}

ScalarField2D sinsin_field() {
  ScalarField2D f;
  f.id = "sinsin";
  f.value = [](Point2 p) { return std::sin(p.x1) * std::sin(p.x2); };
  f.gradient = [](Point2 p) {
    return Vec2{std::cos(p.x1) * std::sin(p.x2), std::sin(p.x1) * std::cos(p.x2)};
  };
  f.hessian = [](Point2 p) {
    return SymMat2{-std::sin(p.x1) * std::sin(p.x2), std::cos(p.x1) * std::cos(p.x2),
                   -std::sin(p.x1) * std::sin(p.x2)};
  };
  return f;
}

// exp(x1 + 2 x2); all derivatives nonzero, convenient for expansion-rate tests.
ScalarField2D expxy_field() {
  ScalarField2D f;
  f.id = "expxy";
  f.value = [](Point2 p) { return std::exp(p.x1 + 2.0 * p.x2); };
  f.gradient = [](Point2 p) {
    const double e = std::exp(p.x1 + 2.0 * p.x2);
    return Vec2{e, 2.0 * e};
  };
  f.hessian = [](Point2 p) {
    const double e = std::exp(p.x1 + 2.0 * p.x2);
    return SymMat2{e, 2.0 * e, 4.0 * e};
  };
  return f;
}

ScalarField2D gauss_field() {
  ScalarField2D f;
  f.id = "gauss";
  f.value = [](Point2 p) { return std::exp(-0.5 * (p.x1 * p.x1 + p.x2 * p.x2)); };
  f.gradient = [](Point2 p) {
    const double v = std::exp(-0.5 * (p.x1 * p.x1 + p.x2 * p.x2));
    return Vec2{-p.x1 * v, -p.x2 * v};
  };
  f.hessian = [](Point2 p) {
    const double v = std::exp(-0.5 * (p.x1 * p.x1 + p.x2 * p.x2));
    return SymMat2{(p.x1 * p.x1 - 1.0) * v, p.x1 * p.x2 * v, (p.x2 * p.x2 - 1.0) * v};
  };
  return f;
}

ScalarField2D radial_sqrt_field() {
  ScalarField2D f;
  f.id = "radial-sqrt";
  f.value = [](Point2 p) { return std::sqrt(1.0 + p.x1 * p.x1 + p.x2 * p.x2); };
  f.gradient = [](Point2 p) {
    const double s = std::sqrt(1.0 + p.x1 * p.x1 + p.x2 * p.x2);
    return Vec2{p.x1 / s, p.x2 / s};
  };
  f.hessian = [](Point2 p) {
    const double s2 = 1.0 + p.x1 * p.x1 + p.x2 * p.x2;
    const double s = std::sqrt(s2);
    const double s3 = s2 * s;
    return SymMat2{1.0 / s - p.x1 * p.x1 / s3, -p.x1 * p.x2 / s3,
                   1.0 / s - p.x2 * p.x2 / s3};
  };
  return f;
}

ScalarField2D runge_field() {
  ScalarField2D f;
  f.id = "runge";
  f.value = [](Point2 p) { return 1.0 / (1.0 + p.x1 * p.x1 + p.x2 * p.x2); };
  f.gradient = [](Point2 p) {
    const double t = 1.0 / (1.0 + p.x1 * p.x1 + p.x2 * p.x2);
    return Vec2{-2.0 * p.x1 * t * t, -2.0 * p.x2 * t * t};
  };
  f.hessian = [](Point2 p) {
    const double t = 1.0 / (1.0 + p.x1 * p.x1 + p.x2 * p.x2);
    const double t2 = t * t;
    const double t3 = t2 * t;
    return SymMat2{-2.0 * t2 + 8.0 * p.x1 * p.x1 * t3, 8.0 * p.x1 * p.x2 * t3,
                   -2.0 * t2 + 8.0 * p.x2 * p.x2 * t3};
  };
  return f;
}

ScalarField2D log_radial_field(double origin_margin) {
  ScalarField2D f;
  f.id = "log-radial";
  f.value = [](Point2 p) { return 0.5 * std::log(p.x1 * p.x1 + p.x2 * p.x2); };
  f.gradient = [](Point2 p) {
    const double r2 = p.x1 * p.x1 + p.x2 * p.x2;
    return Vec2{p.x1 / r2, p.x2 / r2};
  };
  f.hessian = [](Point2 p) {
    const double r2 = p.x1 * p.x1 + p.x2 * p.x2;
    const double r4 = r2 * r2;
    return SymMat2{1.0 / r2 - 2.0 * p.x1 * p.x1 / r4, -2.0 * p.x1 * p.x2 / r4,
                   1.0 / r2 - 2.0 * p.x2 * p.x2 / r4};
  };
  f.domain = [origin_margin](Point2 p) {
    return std::hypot(p.x1, p.x2) > origin_margin;
  };
  return f;
}

std::vector<double> parse_params(std::string_view s, size_t expected,
                                 std::string_view id) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string token(s.substr(pos, comma == std::string_view::npos ? comma
                                                                    : comma - pos));
    try {
      size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw std::invalid_argument("field id '" + std::string(id) +
                                  "': bad numeric parameter '" + token + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw std::invalid_argument("field id '" + std::string(id) + "': expected " +
                                std::to_string(expected) + " parameters");
  }
  return out;
}

}  // namespace

ScalarField2D fundamental_solution(double p, double origin_margin) {
  if (!(p > 1.0 && p < 2.0)) {
    throw std::invalid_argument("fundamental_solution: p must lie in (1, 2), got " +
                                std::to_string(p));
  }
  // u(x) = r^kappa, kappa = (p-2)/(p-1) < 0.
  const double kappa = (p - 2.0) / (p - 1.0);
  ScalarField2D f;
  std::ostringstream os;
  os << "fundsol:" << p;
  f.id = os.str();
  f.value = [kappa](Point2 q) {
    return std::pow(q.x1 * q.x1 + q.x2 * q.x2, 0.5 * kappa);
  };
  f.gradient = [kappa](Point2 q) {
    const double r2 = q.x1 * q.x1 + q.x2 * q.x2;
    const double s = kappa * std::pow(r2, 0.5 * kappa - 1.0);
    return Vec2{s * q.x1, s * q.x2};
  };
  f.hessian = [kappa](Point2 q) {
    const double r2 = q.x1 * q.x1 + q.x2 * q.x2;
    const double rk2 = std::pow(r2, 0.5 * kappa - 1.0);       // r^{kappa-2}
    const double rk4 = rk2 / r2;                              // r^{kappa-4}
    const double c = kappa * (kappa - 2.0) * rk4;
    return SymMat2{c * q.x1 * q.x1 + kappa * rk2, c * q.x1 * q.x2,
                   c * q.x2 * q.x2 + kappa * rk2};
  };
  f.domain = [origin_margin](Point2 q) {
    return std::hypot(q.x1, q.x2) > origin_margin;
  };
  return f;
}

const std::vector<ScalarField2D>& battery() {
  static const std::vector<ScalarField2D> fields = [] {
    std::vector<ScalarField2D> v;
    v.push_back(affine_field(1, 0, 0));
    v.push_back(affine_field(0, 1, 0));
    v.push_back(affine_field(3, -4, 2));
    v.push_back(quadratic_field(1, 2));
    v.push_back(quadratic_field(1, -1));
    v.push_back(quadratic_field(2, 3));
    v.push_back(quadratic_field(1, 1));
    v.push_back(bilinear_field(1));
    v.push_back(cubic_field(1, 1));
    v.push_back(cubic_harmonic_field());
    v.push_back(quartic_field(1, 1));
    v.push_back(sinexp_field());
    v.push_back(expcos_field());
    v.push_back(sinsin_field());
    v.push_back(expxy_field());
    v.push_back(gauss_field());
    v.push_back(radial_sqrt_field());
    v.push_back(runge_field());
    v.push_back(log_radial_field(1e-8));
    v.push_back(fundamental_solution(1.1));
    v.push_back(fundamental_solution(1.5));
    v.push_back(fundamental_solution(1.9));
    return v;
  }();
  return fields;
}

ScalarField2D field_by_id(std::string_view id) {
  for (const auto& f : battery()) {
    if (f.id == id) return f;
  }
  const size_t colon = id.find(':');
  const std::string_view head = id.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);
  if (head == "const") {
    return constant_field(parse_params(args, 1, id)[0]);
  }
  if (head == "affine") {
    auto p = parse_params(args, 3, id);
    return affine_field(p[0], p[1], p[2]);
  }
  if (head == "quad") {
    auto p = parse_params(args, 2, id);
    return quadratic_field(p[0], p[1]);
  }
  if (head == "fundsol") {
    return fundamental_solution(parse_params(args, 1, id)[0]);
  }
  throw std::invalid_argument("unknown field id '" + std::string(id) + "'");
}

ConsistencyReport check_field_consistency(const ScalarField2D& f,
                                          std::span<const Point2> pts, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("check_field_consistency: h must be > 0");
  ConsistencyReport report;
  report.rows.reserve(pts.size());
  for (const Point2 x : pts) {
    const Vec2 e1{h, 0.0}, e2{0.0, h};
    for (const Point2 probe :
         {x, x + e1, x - e1, x + e2, x - e2, x + 2.0 * e1, x - 2.0 * e1,
          x + 2.0 * e2, x - 2.0 * e2}) {
      if (!f.admissible(probe)) {
        throw InadmissiblePointError("check_field_consistency: stencil point outside domain");
      }
    }
    const Vec2 g = f.gradient(x);
    const double fd_g1 = (f.value(x + e1) - f.value(x - e1)) / (2.0 * h);
    const double fd_g2 = (f.value(x + e2) - f.value(x - e2)) / (2.0 * h);
    const double grad_dev =
        std::max(std::abs(fd_g1 - g.x1), std::abs(fd_g2 - g.x2));

    const SymMat2 H = f.hessian(x);
    const Vec2 gp1 = f.gradient(x + e1), gm1 = f.gradient(x - e1);
    const Vec2 gp2 = f.gradient(x + e2), gm2 = f.gradient(x - e2);
    const double fd_h11 = (gp1.x1 - gm1.x1) / (2.0 * h);
    const double fd_h12 = 0.5 * ((gp1.x2 - gm1.x2) + (gp2.x1 - gm2.x1)) / (2.0 * h);
    const double fd_h22 = (gp2.x2 - gm2.x2) / (2.0 * h);
    const double hess_dev =
        std::max({std::abs(fd_h11 - H.a11), std::abs(fd_h12 - H.a12),
                  std::abs(fd_h22 - H.a22)});

    report.rows.push_back({x, grad_dev, hess_dev});
    report.max_grad_deviation = std::max(report.max_grad_deviation, grad_dev);
    report.max_hess_deviation = std::max(report.max_hess_deviation, hess_dev);
  }
  return report;
}

}  // namespace pstat
