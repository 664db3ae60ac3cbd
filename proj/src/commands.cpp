#include "homrot/commands.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "homrot/config.hpp"
#include "homrot/constants.hpp"
#include "homrot/errors.hpp"
#include "homrot/format.hpp"
#include "homrot/pipeline.hpp"
#include "homrot/scenarios.hpp"

namespace homrot {
namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr double kNm = 1e9;

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
        : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        write(header);
    }

    template <typename... Cells>
    void row(const Cells&... cells) {
        static_assert(sizeof...(Cells) > 0);
        if (sizeof...(Cells) != columns_) throw std::logic_error("csv row width mismatch");
        write({std::string_view(cells)...});
    }

private:
    void write(std::initializer_list<std::string_view> cells) {
        bool first = true;
        for (auto c : cells) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::size_t columns_;
};

std::string num(double v) { return format_double(v); }
std::string num(long long v) { return std::to_string(v); }

std::string direction_name(Direction d) {
    switch (d) {
        case Direction::Clockwise: return "cw";
        case Direction::Anticlockwise: return "acw";
        default: return "none";
    }
}

std::string status_name(EstimateStatus s) {
    switch (s) {
        case EstimateStatus::Ok: return "ok";
        case EstimateStatus::ClippedBelowDip: return "clipped-below-dip";
        default: return "clipped-above-baseline";
    }
}

std::string hex(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_metadata(const std::string& command, const ExperimentConfig& config,
                    const CommandOptions& options, CommandReport& report) {
    nlohmann::ordered_json meta;
    meta["command"] = command;
    meta["tool_version"] = kToolVersion;
    meta["config_name"] = config.name;
    meta["config_hash"] = hex(config_hash(config));
    meta["seed"] = config.seed;
    meta["convention"] = std::string(to_string(config.apparatus.convention));
    auto files = nlohmann::json::array();
    for (const auto& f : report.files) files.push_back(f.filename().string());
    meta["files"] = files;
    const auto path = options.out_dir / (command + ".meta.jsonl");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << meta.dump() << '\n';
    report.files.push_back(path);
}

void prepare(const CommandOptions& options) { std::filesystem::create_directories(options.out_dir); }

void write_dip_files(const DipScanResult& dip, const ExperimentConfig& config,
                     const CommandOptions& options, CommandReport& report) {
    const auto scan_path = options.out_dir / "dip_scan.csv";
    {
        CsvWriter csv(scan_path, {"stage_position_m", "rotation_rate_hz", "dwell_s",
                                  "coincidences_counts", "expected_coincidences_counts",
                                  "singles_a_counts", "singles_b_counts", "point"});
        for (const auto& r : dip.records) {
            csv.row(num(r.stage_position), num(r.rotation_rate), num(r.dwell),
                    num(static_cast<long long>(r.coincidences)), num(r.expected_coincidences),
                    num(static_cast<long long>(r.singles_a)),
                    num(static_cast<long long>(r.singles_b)),
                    num(static_cast<long long>(r.setting)));
        }
    }
    report.files.push_back(scan_path);

    const auto fit_path = options.out_dir / "dip_fit.csv";
    const auto& fit = dip.fit;
    const double model_width = dip_width_stage(config.apparatus.source.spectral_width,
                                               config.apparatus.geometry.group_index);
    {
        CsvWriter csv(fit_path, {"parameter", "value", "std", "unit"});
        csv.row(std::string("baseline_rate"), num(fit.baseline_rate), num(fit.baseline_std()),
                std::string("1/s"));
        csv.row(std::string("visibility"), num(fit.visibility), num(fit.visibility_std()),
                std::string("1"));
        csv.row(std::string("center"), num(fit.center), num(fit.center_std()), std::string("m"));
        csv.row(std::string("width"), num(fit.width), num(fit.width_std()), std::string("m"));
        csv.row(std::string("model_width"), num(model_width), std::string(""), std::string("m"));
        csv.row(std::string("steepest_point"),
                num(steepest_point(fit, config.rotation.steepest_side)), std::string(""),
                std::string("m"));
        csv.row(std::string("deviance"), num(fit.deviance), std::string(""), std::string("1"));
        csv.row(std::string("iterations"), num(static_cast<long long>(fit.iterations)),
                std::string(""), std::string("1"));
    }
    report.files.push_back(fit_path);
}

std::string dip_summary(const DipFitResult& fit) {
    std::ostringstream s;
    s << "dip fit: centre " << fit.center * 1e6 << " um +/- " << fit.center_std() * 1e6
      << ", width " << fit.width * 1e6 << " um +/- " << fit.width_std() * 1e6
      << ", visibility " << fit.visibility << ", baseline " << fit.baseline_rate << " /s\n";
    return s.str();
}

}  // namespace

CommandReport cmd_simulate_dip(const ExperimentConfig& config, const CommandOptions& options) {
    prepare(options);
    CommandReport report;
    const auto dip = run_dip_pipeline(config);
    write_dip_files(dip, config, options, report);
    report.summary = dip_summary(dip.fit);
    write_metadata("simulate-dip", config, options, report);
    return report;
}

CommandReport cmd_simulate_rotation(const ExperimentConfig& config, const CommandOptions& options) {
    prepare(options);
    CommandReport report;
    const auto res = run_quantum_pipeline(config, options.threads);
    write_dip_files(res.dip, config, options, report);

    const auto rec_path = options.out_dir / "rotation_records.csv";
    {
        CsvWriter csv(rec_path, {"setting", "run", "direction", "rotation_rate_hz",
                                 "stage_position_m", "dwell_s", "coincidences_counts",
                                 "expected_coincidences_counts", "injected_shift_nm",
                                 "estimated_delay_nm", "estimated_std_nm", "status"});
        for (std::size_t i = 0; i < res.records.size(); ++i) {
            const auto& r = res.records[i];
            const auto& e = res.estimates[i];
            csv.row(num(static_cast<long long>(r.setting)), num(static_cast<long long>(r.run)),
                    direction_name(r.direction), num(r.rotation_rate), num(r.stage_position),
                    num(r.dwell), num(static_cast<long long>(r.coincidences)),
                    num(r.expected_coincidences), num(r.injected_shift * kNm), num(e.delay * kNm),
                    num(e.std * kNm), status_name(e.status));
        }
    }
    report.files.push_back(rec_path);

    const auto& geo = config.apparatus.geometry;
    const double model_slope =
        dip_shift_stage(sagnac_delay(geo.enclosed_area(), {1.0, config.apparatus.convention}),
                        geo.group_index);
    const auto shift_path = options.out_dir / "rotation_shifts.csv";
    {
        CsvWriter csv(shift_path, {"rotation_rate_hz", "cw_mean_nm", "cw_std_nm", "acw_mean_nm",
                                   "acw_std_nm", "shift_nm", "shift_std_nm",
                                   "absolute_average_nm", "model_shift_nm"});
        for (const auto& s : res.shifts) {
            csv.row(num(s.magnitude), num(s.cw_mean * kNm), num(s.cw_std * kNm),
                    num(s.acw_mean * kNm), num(s.acw_std * kNm), num(s.shift * kNm),
                    num(s.std * kNm), num(s.absolute_average * kNm),
                    num(model_slope * s.magnitude * kNm));
        }
    }
    report.files.push_back(shift_path);

    const auto slope_path = options.out_dir / "rotation_slope.csv";
    {
        CsvWriter csv(slope_path, {"quantity", "value", "std", "unit"});
        csv.row(std::string("slope"), num(res.slope.slope * kNm), num(res.slope.slope_std * kNm),
                std::string("nm/Hz"));
        csv.row(std::string("intercept"), num(res.slope.intercept * kNm),
                num(res.slope.intercept_std * kNm), std::string("nm"));
        csv.row(std::string("chi_square"), num(res.slope.chi_square), std::string(""),
                std::string("1"));
        csv.row(std::string("dof"), num(static_cast<long long>(res.slope.dof)), std::string(""),
                std::string("1"));
        csv.row(std::string("model_slope"), num(model_slope * kNm), std::string(""),
                std::string("nm/Hz"));
        csv.row(std::string("operating_point"), num(res.operating_point), std::string(""),
                std::string("m"));
        csv.row(std::string("clipped_estimates"), num(static_cast<long long>(res.clipped)),
                std::string(""), std::string("1"));
    }
    report.files.push_back(slope_path);

    std::ostringstream s;
    s << dip_summary(res.dip.fit) << "operating point " << res.operating_point * 1e6 << " um\n"
      << "shift slope " << res.slope.slope * kNm << " +/- " << res.slope.slope_std * kNm
      << " nm/Hz (model " << model_slope * kNm << " nm/Hz)\n";
    if (res.clipped) s << "warning: " << res.clipped << " estimates clipped and excluded\n";
    report.summary = s.str();
    write_metadata("simulate-rotation", config, options, report);
    return report;
}

CommandReport cmd_calibrate_classical(const ExperimentConfig& config,
                                      const CommandOptions& options) {
    prepare(options);
    CommandReport report;
    const auto res = run_classical_pipeline(config);
    const bool deg = config.angles == AngleUnit::Degrees;
    const double k = deg ? constants::deg_per_rad : 1.0;
    const std::string unit = deg ? "deg" : "rad";

    const auto rec_path = options.out_dir / "classical_records.csv";
    {
        CsvWriter csv(rec_path, {"setting", "run", "direction", "rotation_rate_hz",
                                 deg ? "phase_deg" : "phase_rad",
                                 deg ? "injected_phase_deg" : "injected_phase_rad"});
        for (const auto& r : res.records) {
            csv.row(num(static_cast<long long>(r.setting)), num(static_cast<long long>(r.run)),
                    direction_name(r.direction), num(r.rotation_rate), num(r.phase * k),
                    num(r.injected * k));
        }
    }
    report.files.push_back(rec_path);

    const auto& geo = config.apparatus.geometry;
    const double model_slope = classical_phase_shift(
        sagnac_delay(geo.enclosed_area(), {1.0, config.apparatus.convention}),
        config.classical.wavelength);
    const auto shift_path = options.out_dir / "classical_shifts.csv";
    {
        CsvWriter csv(shift_path,
                      {"rotation_rate_hz", deg ? "cw_mean_deg" : "cw_mean_rad",
                       deg ? "acw_mean_deg" : "acw_mean_rad", deg ? "shift_deg" : "shift_rad",
                       deg ? "shift_std_deg" : "shift_std_rad",
                       deg ? "absolute_average_deg" : "absolute_average_rad",
                       deg ? "model_shift_deg" : "model_shift_rad"});
        for (const auto& s : res.shifts) {
            csv.row(num(s.magnitude), num(s.cw_mean * k), num(s.acw_mean * k), num(s.shift * k),
                    num(s.std * k), num(s.absolute_average * k),
                    num(model_slope * s.magnitude * k));
        }
    }
    report.files.push_back(shift_path);

    const auto slope_path = options.out_dir / "classical_slope.csv";
    {
        CsvWriter csv(slope_path, {"quantity", "value", "std", "unit"});
        csv.row(std::string("slope"), num(res.slope.slope * k), num(res.slope.slope_std * k),
                unit + "/Hz");
        csv.row(std::string("intercept"), num(res.slope.intercept * k),
                num(res.slope.intercept_std * k), unit);
        csv.row(std::string("chi_square"), num(res.slope.chi_square), std::string(""),
                std::string("1"));
        csv.row(std::string("dof"), num(static_cast<long long>(res.slope.dof)), std::string(""),
                std::string("1"));
        csv.row(std::string("model_slope"), num(model_slope * k), std::string(""), unit + "/Hz");
    }
    report.files.push_back(slope_path);

    std::ostringstream s;
    s << "classical phase slope " << res.slope.slope * k << " +/- " << res.slope.slope_std * k
      << " " << unit << "/Hz (model " << model_slope * k << " " << unit << "/Hz)\n";
    report.summary = s.str();
    write_metadata("calibrate-classical", config, options, report);
    return report;
}

CommandReport cmd_satellite(const ExperimentConfig& config, const CommandOptions& options) {
    prepare(options);
    CommandReport report;
    SatelliteScenario one = config.satellite;
    one.revolutions = 1;
    const double per_rev = gravitomagnetic_delay(one);
    const double total = gravitomagnetic_delay(config.satellite);
    const double ratio = kQuotedGravitomagneticDelay / per_rev;
    const double resolution_target = 100e-9 / constants::speed_of_light;

    const auto path = options.out_dir / "satellite.csv";
    {
        CsvWriter csv(path, {"quantity", "value", "unit"});
        csv.row(std::string("per_revolution_delay"), num(per_rev), std::string("s"));
        csv.row(std::string("revolutions"), num(static_cast<long long>(config.satellite.revolutions)),
                std::string("1"));
        csv.row(std::string("total_delay"), num(total), std::string("s"));
        csv.row(std::string("quoted_order_of_magnitude"), num(kQuotedGravitomagneticDelay),
                std::string("s"));
        csv.row(std::string("quoted_over_formula"), num(ratio), std::string("1"));
        csv.row(std::string("revolutions_for_quoted"),
                num(revolutions_needed(config.satellite, kQuotedGravitomagneticDelay)),
                std::string("1"));
        csv.row(std::string("revolutions_for_100nm_path"),
                num(revolutions_needed(config.satellite, resolution_target)), std::string("1"));
    }
    report.files.push_back(path);

    std::ostringstream s;
    s << "gravitomagnetic delay G J / (R c^4): " << per_rev << " s per revolution, " << total
      << " s over " << config.satellite.revolutions << " revolution(s)\n"
      << "quoted order of magnitude: ~1e-16 s, " << ratio
      << " times the bare formula; the prefactor behind the quoted value is not given, this "
         "estimate uses 1\n"
      << "revolutions to reach 100 nm / c: "
      << revolutions_needed(config.satellite, resolution_target) << "\n";
    report.summary = s.str();
    write_metadata("satellite", config, options, report);
    return report;
}

}  // namespace homrot
