#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwcanard/canard.hpp"
#include "pwcanard/continuation.hpp"
#include "pwcanard/linflow.hpp"
#include "pwcanard/model.hpp"
#include "pwcanard/poincare.hpp"

namespace pwc::io {

using nlohmann::json;

// 17 significant digits, round-trip safe; "nan", "inf" and "-inf" for non-finite values.
std::string real(double v);

// Writes to a sibling temporary and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

class Csv {
public:
    explicit Csv(std::vector<std::string> header);
    Csv& cell(double v);
    Csv& cell(long v);
    Csv& cell(int v) { return cell(static_cast<long>(v)); }
    Csv& cell(bool v) { return cell(static_cast<long>(v ? 1 : 0)); }
    Csv& cell(const std::string& v);
    Csv& cell(const char* v) { return cell(std::string(v)); }
    void end_row();
    const std::string& str() const { return buf_; }

private:
    std::size_t columns_;
    std::size_t filled_ = 0;
    std::string buf_;
};

json to_json(const LogValue& v);
json to_json(const Vec2& v);
json to_json(const Params& p);
json to_json(const Landmarks& lm);
json to_json(const EquilibriumInfo& e);
json to_json(const Connection& c);
json to_json(const CycleRecord& c, bool with_orbit = false);
json to_json(const Fold& f);
json to_json(const HopfCheck& h);
json to_json(const HstarResult& r);

std::string orbit_csv(const Orbit& orbit, const Params& p);
std::string samples_csv(const std::vector<OrbitSample>& samples);
std::string branch_csv(const Branch& b);
std::string folds_csv(const std::vector<Fold>& folds);

} // namespace pwc::io
