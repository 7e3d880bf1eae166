#include "fracstab/harmonics.hpp"

#include <cmath>
#include <utility>

#include "fracstab/errors.hpp"

namespace fracstab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
const double kInvSqrtTwoPi = 1.0 / std::sqrt(2.0 * kPi);
const double kInvSqrtPi = 1.0 / std::sqrt(kPi);

/// Flat index of (l, m), 0 <= m <= l, into a triangular table.
inline int triIndex(int l, int m) { return l * (l + 1) / 2 + m; }

/// Normalized associated Legendre values B_{lm}(x) for all 0 <= m <= l <= Lmax,
/// orthonormal on [-1, 1]: integral of B_{lm} B_{l'm} dx = delta_{ll'}.
Eigen::VectorXd legendre_table(double x, int Lmax) {
  Eigen::VectorXd table((Lmax + 1) * (Lmax + 2) / 2);
  const double sinTheta = std::sqrt(std::max(0.0, 1.0 - x * x));
  table[triIndex(0, 0)] = std::sqrt(0.5);
  for (int m = 1; m <= Lmax; ++m) {
    table[triIndex(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sinTheta *
                            table[triIndex(m - 1, m - 1)];
  }
  for (int m = 0; m < Lmax; ++m) {
    table[triIndex(m + 1, m)] =
        std::sqrt(2.0 * m + 3.0) * x * table[triIndex(m, m)];
  }
  for (int m = 0; m <= Lmax; ++m) {
    for (int l = m + 2; l <= Lmax; ++l) {
      const double a =
          std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b = std::sqrt(
          (static_cast<double>(l - 1) * (l - 1) - m * m) /
          (4.0 * static_cast<double>(l - 1) * (l - 1) - 1.0));
      table[triIndex(l, m)] =
          a * (x * table[triIndex(l - 1, m)] - b * table[triIndex(l - 2, m)]);
    }
  }
  return table;
}

/// Azimuth tables cos(m phi_j), sin(m phi_j) for the equispaced grid ring.
void azimuth_tables(int nAz, int Lmax, Eigen::MatrixXd& cosT,
                    Eigen::MatrixXd& sinT) {
  cosT.resize(nAz, Lmax + 1);
  sinT.resize(nAz, Lmax + 1);
  for (int j = 0; j < nAz; ++j) {
    const double phi = 2.0 * kPi * j / nAz;
    for (int m = 0; m <= Lmax; ++m) {
      cosT(j, m) = std::cos(m * phi);
      sinT(j, m) = std::sin(m * phi);
    }
  }
}

/// Orthonormal circle basis {1/sqrt(2 pi), cos(l th)/sqrt(pi), sin/sqrt(pi)}
/// evaluated at one angle, packed as SphereField coefficients for N = 1.
Eigen::VectorXd circle_basis_row(double theta, int Lmax) {
  Eigen::VectorXd row(SphereField::coeffCount(1, Lmax));
  row[0] = kInvSqrtTwoPi;
  for (int l = 1; l <= Lmax; ++l) {
    row[2 * l - 1] = std::cos(l * theta) * kInvSqrtPi;
    row[2 * l] = std::sin(l * theta) * kInvSqrtPi;
  }
  return row;
}

void check_same_dimension(const SphereField& a, const SphereField& b,
                          const char* what) {
  if (a.N != b.N) {
    throw ValidationError(std::string(what) +
                          ": operands live on spheres of different dimension");
  }
}

}  // namespace

SphereField::SphereField(int N, int Lmax) : N(N), Lmax(Lmax) {
  coeffs = Eigen::VectorXd::Zero(coeffCount(N, Lmax));
}

int SphereField::coeffCount(int N, int Lmax) {
  if (N != 1 && N != 2) {
    throw UnsupportedDimensionError(
        "SphereField: only N = 1 and N = 2 are supported");
  }
  if (Lmax < 0) throw ValidationError("SphereField: Lmax must be >= 0");
  return N == 1 ? 2 * Lmax + 1 : (Lmax + 1) * (Lmax + 1);
}

int SphereField::degreeOffset(int N, int l) {
  if (l < 0) throw ValidationError("SphereField: degree must be >= 0");
  if (N == 1) return l == 0 ? 0 : 2 * l - 1;
  return l * l;
}

int SphereField::degreeSize(int N, int l) {
  if (l < 0) throw ValidationError("SphereField: degree must be >= 0");
  if (N == 1) return l == 0 ? 1 : 2;
  return 2 * l + 1;
}

double SphereField::coeff(int l, int j) const {
  if (l < 0 || l > Lmax || j < 0 || j >= degreeSize(N, l)) {
    throw ValidationError("SphereField::coeff: index out of range");
  }
  return coeffs[degreeOffset(N, l) + j];
}

double& SphereField::coeff(int l, int j) {
  if (l < 0 || l > Lmax || j < 0 || j >= degreeSize(N, l)) {
    throw ValidationError("SphereField::coeff: index out of range");
  }
  return coeffs[degreeOffset(N, l) + j];
}

Eigen::VectorBlock<const Eigen::VectorXd> SphereField::degreeBlock(
    int l) const {
  if (l < 0 || l > Lmax) {
    throw ValidationError("SphereField::degreeBlock: degree out of range");
  }
  return coeffs.segment(degreeOffset(N, l), degreeSize(N, l));
}

Eigen::VectorBlock<Eigen::VectorXd> SphereField::degreeBlock(int l) {
  if (l < 0 || l > Lmax) {
    throw ValidationError("SphereField::degreeBlock: degree out of range");
  }
  return coeffs.segment(degreeOffset(N, l), degreeSize(N, l));
}

double SphereField::degreeEnergy(int l) const {
  return degreeBlock(l).squaredNorm();
}

SphereField SphereField::withLmax(int newLmax) const {
  SphereField out(N, newLmax);
  const int lShared = std::min(Lmax, newLmax);
  const int nShared = degreeOffset(N, lShared) + degreeSize(N, lShared);
  out.coeffs.head(nShared) = coeffs.head(nShared);
  return out;
}

SphereField operator+(const SphereField& a, const SphereField& b) {
  check_same_dimension(a, b, "operator+");
  SphereField out = a.Lmax >= b.Lmax ? a : b;
  const SphereField& small = a.Lmax >= b.Lmax ? b : a;
  out.coeffs.head(small.coeffs.size()) += small.coeffs;
  return out;
}

SphereField operator-(const SphereField& a, const SphereField& b) {
  return a + (-1.0 * b);
}

SphereField operator*(double scale, const SphereField& f) {
  SphereField out = f;
  out.coeffs *= scale;
  return out;
}

DegreeProjector DegreeProjector::range(int lo, int hi) {
  if (lo < 0 || hi < lo) {
    throw ValidationError("DegreeProjector::range: need 0 <= lo <= hi");
  }
  DegreeProjector p;
  for (int l = lo; l <= hi; ++l) p.degrees.insert(l);
  return p;
}

SphereField analyze(const Eigen::VectorXd& values, const QuadratureGrid& grid,
                    int Lmax) {
  if (values.size() != grid.size()) {
    throw ValidationError("analyze: values length does not match grid size");
  }
  if (grid.degreeBound < Lmax) {
    throw ResolutionError(
        "analyze: grid degreeBound " + std::to_string(grid.degreeBound) +
        " cannot resolve coefficients up to degree " + std::to_string(Lmax));
  }
  SphereField out(grid.N, Lmax);

  if (grid.N == 1) {
    for (int j = 0; j < grid.size(); ++j) {
      out.coeffs +=
          grid.weights[j] * values[j] * circle_basis_row(grid.polarNodes[j], Lmax);
    }
    return out;
  }

  const int nPolar = static_cast<int>(grid.polarNodes.size());
  const int nAz = grid.azimuthCount;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      valueGrid(values.data(), nPolar, nAz);

  Eigen::MatrixXd cosT, sinT;
  azimuth_tables(nAz, Lmax, cosT, sinT);
  const double wAz = 2.0 * kPi / nAz;
  const Eigen::MatrixXd cosSums = wAz * (valueGrid * cosT);
  const Eigen::MatrixXd sinSums = wAz * (valueGrid * sinT);

  for (int i = 0; i < nPolar; ++i) {
    const Eigen::VectorXd table = legendre_table(grid.polarNodes[i], Lmax);
    const double wPolar = grid.polarWeights[i];
    for (int l = 0; l <= Lmax; ++l) {
      const int offset = SphereField::degreeOffset(2, l);
      out.coeffs[offset] +=
          wPolar * table[triIndex(l, 0)] * cosSums(i, 0) * kInvSqrtTwoPi;
      for (int m = 1; m <= l; ++m) {
        const double scaled = wPolar * table[triIndex(l, m)] * kInvSqrtPi;
        out.coeffs[offset + 2 * m - 1] += scaled * cosSums(i, m);
        out.coeffs[offset + 2 * m] += scaled * sinSums(i, m);
      }
    }
  }
  return out;
}

Eigen::VectorXd synthesize(const SphereField& field,
                           const QuadratureGrid& grid) {
  if (field.N != grid.N) {
    throw ValidationError("synthesize: field and grid dimensions differ");
  }

  if (grid.N == 1) {
    Eigen::VectorXd values(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
      values[j] =
          circle_basis_row(grid.polarNodes[j], field.Lmax).dot(field.coeffs);
    }
    return values;
  }

  const int nPolar = static_cast<int>(grid.polarNodes.size());
  const int nAz = grid.azimuthCount;
  const int Lmax = field.Lmax;

  Eigen::MatrixXd polarCos = Eigen::MatrixXd::Zero(nPolar, Lmax + 1);
  Eigen::MatrixXd polarSin = Eigen::MatrixXd::Zero(nPolar, Lmax + 1);
  for (int i = 0; i < nPolar; ++i) {
    const Eigen::VectorXd table = legendre_table(grid.polarNodes[i], Lmax);
    for (int l = 0; l <= Lmax; ++l) {
      const int offset = SphereField::degreeOffset(2, l);
      polarCos(i, 0) +=
          field.coeffs[offset] * table[triIndex(l, 0)] * kInvSqrtTwoPi;
      for (int m = 1; m <= l; ++m) {
        const double basis = table[triIndex(l, m)] * kInvSqrtPi;
        polarCos(i, m) += field.coeffs[offset + 2 * m - 1] * basis;
        polarSin(i, m) += field.coeffs[offset + 2 * m] * basis;
      }
    }
  }

  Eigen::MatrixXd cosT, sinT;
  azimuth_tables(nAz, Lmax, cosT, sinT);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      valueGrid = polarCos * cosT.transpose() + polarSin * sinT.transpose();
  return Eigen::Map<const Eigen::VectorXd>(valueGrid.data(), grid.size());
}

double synthesize_at(const SphereField& field, const SpherePoint& point) {
  if (field.N != point.dim()) {
    throw ValidationError("synthesize_at: field and point dimensions differ");
  }
  if (field.N == 1) {
    const double theta = std::atan2(point.coords[1], point.coords[0]);
    return circle_basis_row(theta, field.Lmax).dot(field.coeffs);
  }
  const double x = point.coords[2];
  const double phi = std::atan2(point.coords[1], point.coords[0]);
  const Eigen::VectorXd table = legendre_table(x, field.Lmax);
  double value = 0.0;
  for (int l = 0; l <= field.Lmax; ++l) {
    const int offset = SphereField::degreeOffset(2, l);
    value += field.coeffs[offset] * table[triIndex(l, 0)] * kInvSqrtTwoPi;
    for (int m = 1; m <= l; ++m) {
      const double basis = table[triIndex(l, m)] * kInvSqrtPi;
      value += basis * (field.coeffs[offset + 2 * m - 1] * std::cos(m * phi) +
                        field.coeffs[offset + 2 * m] * std::sin(m * phi));
    }
  }
  return value;
}

SphereField apply_As(const SphereField& field, const ProblemParams& params) {
  if (field.N != params.N) {
    throw ValidationError("apply_As: field and params dimensions differ");
  }
  SphereField out = field;
  for (int l = 0; l <= field.Lmax; ++l) {
    out.degreeBlock(l) *= alpha(l, params);
  }
  return out;
}

SphereField apply_As_inv(const SphereField& field,
                         const ProblemParams& params) {
  if (field.N != params.N) {
    throw ValidationError("apply_As_inv: field and params dimensions differ");
  }
  SphereField out = field;
  for (int l = 0; l <= field.Lmax; ++l) {
    out.degreeBlock(l) /= alpha(l, params);
  }
  return out;
}

SphereField project(const SphereField& field, const DegreeProjector& projector) {
  SphereField out = field;
  for (int l = 0; l <= field.Lmax; ++l) {
    if (!projector.passes(l)) out.degreeBlock(l).setZero();
  }
  return out;
}

}  // namespace fracstab
