#pragma once

#include <array>
#include <optional>

#include "hspace/algebra.hpp"
#include "hspace/maps.hpp"

namespace hspace {

/// Parametrized surface in CP^3: four expressions in the complex parameters
/// u, v, with a sampling box over (u_re, u_im, v_re, v_im).
struct SurfacePatch {
    std::string name;
    std::array<ExprPtr, 4> z;
    Box domain;  // 4 intervals: u_re, u_im, v_re, v_im
};

/// theta(z, w) = z1 w3 - z3 w1 - z2 w4 + z4 w2, the pairing defining the
/// contact distribution in homogeneous coordinates.
Complex contact_pairing(const std::array<Complex, 4>& z, const std::array<Complex, 4>& w);

/// Patch components as jets over the four real parameter directions
/// (u_re, u_im, v_re, v_im); u is seeded with gradient (1, i, 0, 0).
std::array<Jet2, 4> eval_patch(const SurfacePatch& s, Complex u, Complex v);

/// theta applied to the position and its holomorphic v-derivative; vanishes
/// identically iff the u = const foliation is tangent to the contact
/// distribution.
Complex contact_residual(const SurfacePatch& s, Complex u, Complex v);

/// Largest antiholomorphic derivative over the four components; a declared
/// patch must keep this near zero.
double cauchy_riemann_residual(const SurfacePatch& s, Complex u, Complex v);

/// (w1, w2, w3, w4) = (-conj z2, conj z1, -conj z4, conj z3) evaluated at
/// conjugated parameters.
SurfacePatch conjugate_surface(const SurfacePatch& s);

/// x = (z1 + z2 j)^{-1} (z3 + z4 j) as a point of R^4 in quaternion
/// component order. Throws IncidenceAtInfinity where z1 + z2 j vanishes.
std::array<double, 4> incidence_point(const SurfacePatch& s, Complex u, Complex v);

/// Same map with full parameter jets.
std::array<Jet2, 4> incidence_jets(const SurfacePatch& s, Complex u, Complex v);

struct NewtonOptions {
    int max_iterations = 50;
    double step_tol = 1e-12;
    double residual_tol = 1e-10;
    double domain_inflation = 40.0;  // escape box relative to the patch domain
};

/// Newton inversion of the incidence map near the guess.
std::pair<Complex, Complex> invert_incidence(const SurfacePatch& s, std::span<const double> x,
                                             std::pair<Complex, Complex> guess,
                                             const NewtonOptions& options = {});

struct SeedEntry {
    Box region;                     // 4d box in x
    std::array<double, 4> guess;    // (u_re, u_im, v_re, v_im)
};

/// The submersion realized by a contact surface: x in R^4 maps to the
/// parameter u of the piercing point, solved by Newton continuation from a
/// seed table. Derivatives come from implicit differentiation of the
/// incidence map, so the exposed maps are fully jet-valued.
class SurfaceSubmersion {
public:
    /// Validates the contact condition and holomorphy on the patch domain
    /// before construction (ContactViolation otherwise).
    static SurfaceSubmersion build(SurfacePatch s, std::vector<SeedEntry> seeds,
                                   int validation_samples = 64, const NewtonOptions& options = {});

    /// R^4 -> C as two real targets.
    MapFunction map4() const;
    /// Restriction to the slice x_D = 0, a 3 -> 2 map.
    MapFunction map3() const;

    std::pair<Complex, Complex> parameters_at(std::span<const double> x) const;
    const SurfacePatch& patch() const { return patch_; }

private:
    SurfaceSubmersion(SurfacePatch s, std::vector<SeedEntry> seeds, NewtonOptions options)
        : patch_(std::move(s)), seeds_(std::move(seeds)), options_(options) {}

    std::array<double, 4> solve(std::span<const double> x) const;

    SurfacePatch patch_;
    std::vector<SeedEntry> seeds_;
    NewtonOptions options_;
};

/// Projective point [sigma : tau : z3 : z4] with z3 + z4 j = (sigma + tau j) x.
ProjectivePoint sky(const Quaternion& x, Complex sigma, Complex tau);
std::array<Complex, 4> sky_point(const Quaternion& x, Complex sigma, Complex tau);
/// Tangent direction of the sky at [sigma : tau] along (dsigma, dtau); the
/// incidence is linear in (sigma, tau), so this is again a sky point.
std::array<Complex, 4> sky_tangent(const Quaternion& x, Complex dsigma, Complex dtau);

struct IsotropicDirections {
    std::array<Complex, 3> plus;
    std::array<Complex, 3> minus;
    double isotropy_residual = 0.0;
};

/// The two null complex directions spanning the complexified horizontal
/// plane of a horizontally conformal 3 -> 2 map, normalized to unit real
/// part.
IsotropicDirections horizontal_isotropic_directions(const MapJets& mj, const MetricChart& g,
                                                    std::span<const double> p,
                                                    double hwc_tol = 1e-6);

/// Same directions as a differentiable field (+1 or -1 selects the branch).
VectorFieldJets isotropic_direction_field(const MapFunction& f, const MetricChart& g, int sign,
                                          double hwc_tol = 1e-6);

/// Coordinate cross product of the two component gradients: spans ker df for
/// a submersive 3 -> 2 map.
VectorFieldJets vertical_field_3to2(const MapFunction& f);

/// Built-in surface library ("model-rotational" = (1, v, u, uv)).
const SurfacePatch& builtin_surface(const std::string& name);
/// Seed tables for the built-in surfaces.
std::vector<SeedEntry> builtin_seeds(const std::string& name);

}  // namespace hspace
