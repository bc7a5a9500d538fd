#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gb/analysis.hpp"
#include "gb/construction.hpp"
#include "gb/energy.hpp"
#include "gb/render.hpp"

namespace gb {

using Json = nlohmann::ordered_json;

Json field_to_json(const StrainField& f);
StrainField field_from_json(const Json& j);

Json admissibility_to_json(const AdmissibilityReport& r);
Json energy_to_json(const EnergyReport& r);
Json sweep_to_json(const SweepResult& s);
std::string sweep_to_csv(const SweepResult& s);

// A parsed run configuration: model parameters plus command-level options.
struct Config {
    Params params;
    int random_loops = 32;
    std::vector<double> sweep_sin_thetas;
    RenderOptions render;
    std::string out;
    std::string csv;
    std::string svg;
};

// Accepts angles in radians or degrees (angle_unit), and the misorientation
// either as "theta" or directly as "sin_theta".
Config config_from_json(const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gb
