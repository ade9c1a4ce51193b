#include "hspace/builtins.hpp"

#include <map>

#include "hspace/errors.hpp"
#include "hspace/expr.hpp"

namespace hspace {

namespace {

MetricChart flat_chart(const std::string& name, int dim, const std::string& prefix) {
    std::vector<std::string> coords;
    std::vector<ExprPtr> diag;
    for (int i = 0; i < dim; ++i) {
        coords.push_back(prefix + std::to_string(i + 1));
        diag.push_back(num(1.0));
    }
    MetricChart m = make_diagonal_metric(name, coords, diag);
    m.domain.lo.assign(static_cast<std::size_t>(dim), -1.0);
    m.domain.hi.assign(static_cast<std::size_t>(dim), 1.0);
    return m;
}

MetricChart hyperbolic_chart(const std::string& name, int dim) {
    std::vector<std::string> coords;
    for (int i = 0; i < dim; ++i) coords.push_back("x" + std::to_string(i + 1));
    const ExprPtr conf = div(num(1.0), pow(var(coords.back()), 2));
    std::vector<ExprPtr> diag(static_cast<std::size_t>(dim), conf);
    MetricChart m = make_diagonal_metric(name, coords, diag);
    m.guard = parse_predicate(coords.back() + " > 0.05");
    m.domain.lo.assign(static_cast<std::size_t>(dim), -1.0);
    m.domain.hi.assign(static_cast<std::size_t>(dim), 1.0);
    m.domain.lo.back() = 0.1;
    return m;
}

MetricChart round_s3_chart() {
    ExprPtr norm2 = add(pow(var("x1"), 2), add(pow(var("x2"), 2), pow(var("x3"), 2)));
    const ExprPtr conf = div(num(4.0), pow(add(num(1.0), norm2), 2));
    MetricChart m = make_diagonal_metric("round-s3", {"x1", "x2", "x3"}, {conf, conf, conf});
    m.domain.lo = {-1.0, -1.0, -1.0};
    m.domain.hi = {1.0, 1.0, 1.0};
    return m;
}

}  // namespace

const MetricChart& builtin_metric(const std::string& name) {
    static const std::map<std::string, MetricChart> table = [] {
        std::map<std::string, MetricChart> t;
        t.emplace("flat-r2", flat_chart("flat-r2", 2, "y"));
        t.emplace("flat-r3", flat_chart("flat-r3", 3, "x"));
        t.emplace("flat-r4", flat_chart("flat-r4", 4, "x"));
        t.emplace("hyperbolic-3", hyperbolic_chart("hyperbolic-3", 3));
        t.emplace("hyperbolic-4", hyperbolic_chart("hyperbolic-4", 4));
        t.emplace("round-s3", round_s3_chart());
        return t;
    }();
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown built-in metric: " + name);
    return it->second;
}

std::vector<std::string> builtin_metric_names() {
    return {"flat-r2", "flat-r3", "flat-r4", "hyperbolic-3", "hyperbolic-4", "round-s3"};
}

namespace {

const char* const kHspaceFlat = R"cfg(# H-space of the flat Euclidean 3-structure
version = 1

[weyl flat]
builtin = flat-euclidean

[map linear]
coords = x1, x2, x3
components = x1 + i*x2
kinds = complex

[check base-einstein-weyl]
type = einstein-weyl
weyl = flat
samples = 50
tolerance = 1e-6

[check hspace-scalar]
type = calderbank-scalar
weyl = flat
expected = -12
samples = 100
tolerance = 1e-6

[check hspace-einstein]
type = calderbank-einstein
weyl = flat
samples = 100
tolerance = 1e-6

[check hspace-conformally-flat]
type = calderbank-flatness
weyl = flat
samples = 100
tolerance = 1e-6

[check hspace-asd]
type = calderbank-asd
weyl = flat
samples = 100
tolerance = 1e-6

[check pole-order]
type = pole
weyl = flat
samples = 25
tolerance = 1e-6

[check retract-morphism]
type = retract-verdict
weyl = flat
samples = 50
tension_tolerance = 1e-6
hwc_tolerance = 1e-8

[check retract-dilation]
type = retract-dilation
weyl = flat
expected = t^2
samples = 50
tolerance = 1e-8

[check compose-linear]
type = compose-verdict
weyl = flat
map = linear
samples = 40
tension_tolerance = 1e-6
hwc_tolerance = 1e-8
)cfg";

const char* const kHspaceRound = R"cfg(# H-space of the round 3-sphere
version = 1

[weyl round]
builtin = round-s3

[check base-einstein-weyl]
type = einstein-weyl
weyl = round
samples = 50
tolerance = 1e-6

[check base-scalar]
type = weyl-scalar
weyl = round
expected = 6
samples = 50
tolerance = 1e-6

[check hspace-einstein]
type = calderbank-einstein
weyl = round
samples = 100
tolerance = 1e-6

[check hspace-asd]
type = calderbank-asd
weyl = round
samples = 100
tolerance = 1e-6

[check pole-order]
type = pole
weyl = round
samples = 25
tolerance = 1e-6

[check retract-morphism]
type = retract-verdict
weyl = round
samples = 50
tension_tolerance = 1e-6
hwc_tolerance = 1e-8
)cfg";

const char* const kHspaceHyperbolic = R"cfg(# H-space of hyperbolic 3-space
version = 1

[weyl hyp]
builtin = hyperbolic-3

[map radial]
coords = x1, x2, x3
components = x1 + i*sqrt(x2^2 + x3^2)
kinds = complex
guard = x2^2 + x3^2 > 0.04

[check base-einstein-weyl]
type = einstein-weyl
weyl = hyp
samples = 50
tolerance = 1e-6

[check base-scalar]
type = weyl-scalar
weyl = hyp
expected = -6
samples = 50
tolerance = 1e-6

[check hspace-einstein]
type = calderbank-einstein
weyl = hyp
samples = 100
tolerance = 1e-6

[check hspace-asd]
type = calderbank-asd
weyl = hyp
samples = 100
tolerance = 1e-6

[check retract-morphism]
type = retract-verdict
weyl = hyp
samples = 40
tension_tolerance = 1e-6
hwc_tolerance = 1e-8

[check compose-radial]
type = compose-verdict
weyl = hyp
map = radial
samples = 40
tension_tolerance = 1e-6
hwc_tolerance = 1e-8
)cfg";

const char* const kSurfaceModel = R"cfg(# twistor pipeline over the built-in rotational surface
version = 1

[surface model]
builtin = model-rotational

[metric hyp4]
builtin = hyperbolic-4
guard = x4 > 0.1
domain = -1..1, -1..1, -1..1, 0.1..1

[metric flat3]
builtin = flat-r3

[map reference]
coords = x1, x2, x3, x4
components = x1 + i*sqrt(x2^2 + x3^2 + x4^2)
kinds = complex

[check contact-condition]
type = contact
surface = model
samples = 500
tolerance = 1e-10

[check holomorphy]
type = holomorphy
surface = model
samples = 100
tolerance = 1e-8

[check incidence-roundtrip]
type = incidence-roundtrip
surface = model
samples = 200
tolerance = 1e-9

[check closed-form-match]
type = submersion-formula
surface = model
reference = reference
domain = -1..1, -1..1, -1..1, 0.1..1
samples = 100
tolerance = 1e-8

[check lifted-morphism]
type = pipeline-verdict
surface = model
metric = hyp4
samples = 50
tension_tolerance = 1e-6
hwc_tolerance = 1e-8

[check boundary-restriction]
type = boundary-hwc
surface = model
metric = flat3
domain = -1..1, -1..1, -1..1
guard = x2^2 + x3^2 > 0.04 && x2 + sqrt(x2^2 + x3^2) > 0.25
samples = 60
tolerance = 1e-8

[check hermitian-integrable]
type = nijenhuis-best
surface = model
metric = hyp4
domain = -1..1, -1..1, -1..1, 0.1..1
samples = 50
tolerance = 1e-6

[check isotropic-complements]
type = isotropic-frobenius
surface = model
metric = flat3
domain = -1..1, -1..1, -1..1
guard = x2^2 + x3^2 > 0.04 && x2 + sqrt(x2^2 + x3^2) > 0.25
samples = 100
tolerance = 1e-6

[check sky-tangency]
type = sky-tangency
samples = 100
tolerance = 1e-10
)cfg";

const char* const kInfrastructure = R"cfg(# derivative engine and algebra self-checks
version = 1

[check jet-oracle]
type = jet-oracle
samples = 500
grad_tolerance = 1e-6
hess_tolerance = 1e-4

[check quaternion-laws]
type = quaternion-laws
samples = 1000
tolerance = 1e-12
)cfg";

}  // namespace

const std::string& builtin_config(const std::string& name) {
    static const std::map<std::string, std::string> table{
        {"hspace-flat", kHspaceFlat},
        {"hspace-round-s3", kHspaceRound},
        {"hspace-hyperbolic3", kHspaceHyperbolic},
        {"surface-model", kSurfaceModel},
        {"infrastructure", kInfrastructure},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw ConfigError("'" + name + "' is neither a readable file nor a built-in suite");
    return it->second;
}

std::vector<std::string> builtin_config_names() {
    return {"hspace-flat", "hspace-hyperbolic3", "hspace-round-s3", "infrastructure", "surface-model"};
}

}  // namespace hspace
