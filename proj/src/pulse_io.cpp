#include "pulse_io.hpp"

#include <fstream>
#include <json.hpp>

namespace isingqoc {

namespace {
constexpr const char* kFormatTag = "isingqoc-pulse-v1";
}

std::string pulse_to_json(const ControlProtocol& pulse) {
  if (pulse.kind == ProtocolKind::SuddenQuench)
    throw std::invalid_argument("quench protocols are not stored as pulse files");
  nlohmann::json doc;
  doc["format"] = kFormatTag;
  doc["f0"] = pulse.f_start;
  doc["fT"] = pulse.f_end;
  doc["T"] = pulse.duration;
  doc["superiterations"] = nlohmann::json::array();
  for (const auto& layer : pulse.corrections) {
    doc["superiterations"].push_back({{"frequencies", layer.basis.frequencies},
                                      {"phases", layer.basis.phases},
                                      {"coefficients", layer.coefficients}});
  }
  return doc.dump(2) + "\n";
}

ControlProtocol pulse_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("malformed pulse file: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormatTag)
      throw io_error("unsupported pulse file format tag");
    const double f0 = doc.at("f0").get<double>();
    const double fT = doc.at("fT").get<double>();
    const double T = doc.at("T").get<double>();
    std::vector<PulseCorrection> corrections;
    for (const auto& layer : doc.at("superiterations")) {
      PulseCorrection c;
      c.basis.frequencies = layer.at("frequencies").get<std::vector<double>>();
      c.basis.phases = layer.at("phases").get<std::vector<double>>();
      c.coefficients = layer.at("coefficients").get<std::vector<double>>();
      corrections.push_back(std::move(c));
    }
    if (corrections.empty()) return ControlProtocol::linear_ramp(f0, fT, T);
    return ControlProtocol::dcrab_pulse(f0, fT, T, std::move(corrections));
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("malformed pulse file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw io_error(std::string("malformed pulse file: ") + e.what());
  }
}

void save_pulse(const ControlProtocol& pulse, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open pulse file for writing: " + path);
  out << pulse_to_json(pulse);
  if (!out) throw io_error("failed writing pulse file: " + path);
}

ControlProtocol load_pulse(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open pulse file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return pulse_from_json(text);
}

}  // namespace isingqoc
