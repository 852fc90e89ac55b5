#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "linkdim/dimension.hpp"
#include "linkdim/distfit.hpp"
#include "linkdim/error.hpp"
#include "linkdim/hurst.hpp"
#include "linkdim/ingest.hpp"
#include "linkdim/report.hpp"
#include "linkdim/series.hpp"
#include "linkdim/stats.hpp"
#include "linkdim/synth.hpp"

namespace py = pybind11;
using namespace linkdim;

namespace {

RateSeries make_series(std::vector<double> samples, double bin_width) {
    RateSeries s;
    s.samples = std::move(samples);
    s.bin_width = bin_width;
    validate_series(s);
    return s;
}

}  // namespace

PYBIND11_MODULE(_linkdim, m) {
    m.doc() = "Self-similarity analysis, traffic model fitting and link dimensioning.";
    m.attr("__version__") = kToolVersion;

    py::register_exception<Error>(m, "LinkdimError", PyExc_ValueError);

    // ingest
    py::class_<PacketRecord>(m, "PacketRecord")
        .def(py::init<>())
        .def_readwrite("timestamp", &PacketRecord::timestamp)
        .def_readwrite("size", &PacketRecord::size);
    py::class_<PacketTrace>(m, "PacketTrace")
        .def(py::init<>())
        .def_readwrite("records", &PacketTrace::records)
        .def_readwrite("duration", &PacketTrace::duration)
        .def_readwrite("source_label", &PacketTrace::source_label)
        .def("__len__", [](const PacketTrace& t) { return t.records.size(); });
    py::class_<TraceSummary>(m, "TraceSummary")
        .def_readonly("packet_count", &TraceSummary::packet_count)
        .def_readonly("total_bits", &TraceSummary::total_bits)
        .def_readonly("duration", &TraceSummary::duration)
        .def_readonly("mean_rate", &TraceSummary::mean_rate);
    m.def("parse_csv_trace", [](const std::string& text) { return parse_csv_trace_string(text); }, py::arg("text"));
    m.def("parse_pcap_trace", &parse_pcap_trace, py::arg("path"));
    m.def("load_trace", &load_trace, py::arg("path"), py::arg("format") = "auto");
    m.def("trace_summary", &trace_summary);

    // series
    py::class_<RateSeries>(m, "RateSeries")
        .def(py::init(&make_series), py::arg("samples"), py::arg("bin_width") = 1.0)
        .def_readwrite("samples", &RateSeries::samples)
        .def_readwrite("bin_width", &RateSeries::bin_width)
        .def_readwrite("origin_label", &RateSeries::origin_label)
        .def("__len__", &RateSeries::size);
    m.def("aggregate", &aggregate, py::arg("trace"), py::arg("T"));
    m.def("block_aggregate", &block_aggregate, py::arg("series"), py::arg("m"));

    // stats
    py::class_<Moments>(m, "Moments")
        .def_readonly("mean", &Moments::mean)
        .def_readonly("rate_variance", &Moments::rate_variance)
        .def_readonly("bin_variance", &Moments::bin_variance);
    py::class_<LineFit>(m, "LineFit")
        .def_readonly("slope", &LineFit::slope)
        .def_readonly("intercept", &LineFit::intercept)
        .def_readonly("r_squared", &LineFit::r_squared);
    m.def("moments", &moments);
    m.def("autocorrelation", [](const RateSeries& s, std::size_t max_lag) {
        std::vector<double> r;
        for (const auto& p : autocorrelation(s, max_lag).lags) r.push_back(p.r);
        return r;
    }, py::arg("series"), py::arg("max_lag"), "Returns r(0..max_lag).");
    m.def("periodogram", [](const RateSeries& s) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : periodogram(s).points) out.emplace_back(p.omega, p.power);
        return out;
    }, "Returns (omega, power) pairs.");
    m.def("ols_fit", [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<Point2> p;
        for (auto [x, y] : pts) p.push_back({x, y});
        return ols_fit(p);
    });

    // hurst
    py::enum_<HurstMethod>(m, "HurstMethod")
        .value("VarianceTime", HurstMethod::VarianceTime)
        .value("RescaledRange", HurstMethod::RescaledRange)
        .value("Periodogram", HurstMethod::Periodogram);
    py::class_<HurstEstimate>(m, "HurstEstimate")
        .def_readonly("method", &HurstEstimate::method)
        .def_readonly("H", &HurstEstimate::H)
        .def_readonly("fit", &HurstEstimate::fit)
        .def_property_readonly("points", [](const HurstEstimate& e) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p : e.points) out.emplace_back(p.x, p.y);
            return out;
        });
    m.def("variance_time", py::overload_cast<const RateSeries&>(&variance_time));
    m.def("rescaled_range", py::overload_cast<const RateSeries&>(&rescaled_range));
    m.def("periodogram_hurst", &periodogram_hurst, py::arg("series"), py::arg("low_fraction") = kDefaultLowFraction);
    m.def("self_similarity_verdict", [](const std::vector<double>& hs) { return self_similarity_verdict(hs); });

    // distfit
    py::enum_<DistributionFamily>(m, "DistributionFamily")
        .value("Normal", DistributionFamily::Normal)
        .value("Lognormal", DistributionFamily::Lognormal)
        .value("GEV", DistributionFamily::GEV)
        .value("Weibull", DistributionFamily::Weibull)
        .value("Pareto", DistributionFamily::Pareto)
        .value("Exponential", DistributionFamily::Exponential);
    py::class_<FittedDistribution>(m, "FittedDistribution")
        .def(py::init([](DistributionFamily f, const std::vector<double>& p) { return make_distribution(f, p); }))
        .def_readonly("family", &FittedDistribution::family)
        .def_readonly("params", &FittedDistribution::params)
        .def("cdf", [](const FittedDistribution& d, double x) { return cdf(d, x); })
        .def("pdf", [](const FittedDistribution& d, double x) { return pdf(d, x); })
        .def("quantile", [](const FittedDistribution& d, double p) { return quantile(d, p); });
    m.def("fit", [](DistributionFamily f, const std::vector<double>& xs, bool lognormal_mle) {
        FitOptions o;
        if (lognormal_mle) o.lognormal = LognormalMethod::MaximumLikelihood;
        return fit(f, xs, o);
    }, py::arg("family"), py::arg("samples"), py::arg("lognormal_mle") = false);
    m.def("normal_quantile", &normal_quantile);
    m.def("correlation_coefficient", [](const std::vector<double>& a, const std::vector<double>& b) {
        return correlation_coefficient(a, b);
    });
    m.def("qq_gamma", [](const std::vector<double>& xs, const FittedDistribution& d) { return qq_pairs(xs, d).gamma; });
    m.def("rank_fits", [](const std::vector<double>& xs, const std::vector<DistributionFamily>& fams) {
        std::vector<std::pair<DistributionFamily, std::optional<double>>> out;
        for (const auto& r : rank_fits(xs, fams)) out.emplace_back(r.family, r.gamma);
        return out;
    });

    // dimension
    py::enum_<Approach>(m, "Approach")
        .value("C1", Approach::C1)
        .value("C2", Approach::C2)
        .value("C3", Approach::C3)
        .value("C4", Approach::C4)
        .value("C5", Approach::C5)
        .value("RuleOfThumb", Approach::RuleOfThumb)
        .value("Fitted", Approach::Fitted);
    py::class_<ProvisioningInput>(m, "ProvisioningInput")
        .def(py::init([](double mu, double var, double T, double eps) { return ProvisioningInput{mu, var, T, eps}; }),
             py::arg("mu"), py::arg("rate_variance"), py::arg("T") = 1.0, py::arg("epsilon") = 0.01)
        .def_readwrite("mu", &ProvisioningInput::mu)
        .def_readwrite("rate_variance", &ProvisioningInput::rate_variance)
        .def_readwrite("T", &ProvisioningInput::T)
        .def_readwrite("epsilon", &ProvisioningInput::epsilon);
    py::class_<ProvisioningResult>(m, "ProvisioningResult")
        .def_readonly("approach", &ProvisioningResult::approach)
        .def_readonly("capacity", &ProvisioningResult::capacity)
        .def_readonly("input", &ProvisioningResult::input)
        .def_readonly("empirical_epsilon", &ProvisioningResult::empirical_epsilon)
        .def_readonly("passed", &ProvisioningResult::pass)
        .def_readonly("warning", &ProvisioningResult::warning);
    m.def("capacity_c1", &capacity_c1);
    m.def("capacity_c2", &capacity_c2);
    m.def("capacity_c3", &capacity_c3);
    m.def("tail_approximation_root", &tail_approximation_root);
    m.def("capacity_fitted", py::overload_cast<const FittedDistribution&, double>(&capacity_fitted));
    m.def("capacity_rule_of_thumb", &capacity_rule_of_thumb);
    m.def("empirical_epsilon", &empirical_epsilon);
    m.def("validate", &validate);

    // synth
    py::enum_<GeneratorKind>(m, "GeneratorKind")
        .value("IidGaussian", GeneratorKind::IidGaussian)
        .value("IidLognormal", GeneratorKind::IidLognormal)
        .value("IidGEV", GeneratorKind::IidGEV)
        .value("FractionalGaussianNoise", GeneratorKind::FractionalGaussianNoise)
        .value("PoissonPackets", GeneratorKind::PoissonPackets);
    py::class_<GeneratorSpec>(m, "GeneratorSpec")
        .def(py::init<>())
        .def_readwrite("kind", &GeneratorSpec::kind)
        .def_readwrite("length", &GeneratorSpec::length)
        .def_readwrite("seed", &GeneratorSpec::seed)
        .def_readwrite("bin_width", &GeneratorSpec::bin_width)
        .def_readwrite("mean", &GeneratorSpec::mean)
        .def_readwrite("std", &GeneratorSpec::std)
        .def_readwrite("hurst", &GeneratorSpec::hurst)
        .def_readwrite("mu_log", &GeneratorSpec::mu_log)
        .def_readwrite("sigma_log", &GeneratorSpec::sigma_log)
        .def_readwrite("gev_shape", &GeneratorSpec::gev_shape)
        .def_readwrite("gev_location", &GeneratorSpec::gev_location)
        .def_readwrite("gev_scale", &GeneratorSpec::gev_scale)
        .def_readwrite("packet_rate", &GeneratorSpec::packet_rate)
        .def_readwrite("packet_bytes", &GeneratorSpec::packet_bytes);
    m.def("generate_rates", [](const GeneratorSpec& s) { return generate_rates(s).series; });
    m.def("generate_trace", &generate_trace);

    // full pipeline
    m.def("analyze", [](const PacketTrace& trace, const std::vector<double>& timescales, double epsilon) {
        AnalysisConfig c;
        c.timescales = timescales;
        c.epsilon = epsilon;
        return to_json(analyze_trace(trace, c)).dump();
    }, py::arg("trace"), py::arg("timescales") = std::vector<double>{0.01, 0.05, 0.1, 0.5, 1.0},
       py::arg("epsilon") = 0.01, "Runs the full pipeline and returns the JSON report text.");
}
