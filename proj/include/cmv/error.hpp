#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmv {

// Machine-readable failure codes; the CLI maps these onto JSON error
// objects and exit code 2.
enum class errc {
    invalid_input,
    degenerate_span,
    chart_degenerate,
    plane_through_center,
    center_on_curve,
    vertex_on_curve,
    invalid_camera,
    degenerate_pair,
    invalid_fundamental,
    non_generic_epipole,
    invalid_degree,
    degenerate_parameter,
    no_planar_solution,
    no_valid_pair,
    non_converged,
    parse_error,
};

inline std::string_view to_string(errc c)
{
    switch (c) {
        case errc::invalid_input: return "invalid-input";
        case errc::degenerate_span: return "degenerate-span";
        case errc::chart_degenerate: return "chart-degenerate";
        case errc::plane_through_center: return "plane-through-center";
        case errc::center_on_curve: return "center-on-curve";
        case errc::vertex_on_curve: return "vertex-on-curve";
        case errc::invalid_camera: return "invalid-camera";
        case errc::degenerate_pair: return "degenerate-pair";
        case errc::invalid_fundamental: return "invalid-fundamental";
        case errc::non_generic_epipole: return "non-generic-epipole";
        case errc::invalid_degree: return "invalid-degree";
        case errc::degenerate_parameter: return "degenerate-parameter";
        case errc::no_planar_solution: return "no-planar-solution";
        case errc::no_valid_pair: return "no-valid-pair";
        case errc::non_converged: return "non-converged";
        case errc::parse_error: return "parse-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& message, std::string location = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          location_(std::move(location))
    {
    }

    errc code() const { return code_; }
    const std::string& location() const { return location_; }

  private:
    errc code_;
    std::string location_;
};

}  // namespace cmv
