#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "scene3d/geometry.hpp"

namespace scene3d {

enum class LocalAxis { x, y, z };
enum class WrefMode { pitch, yaw, roll };

const char* to_string(LocalAxis a);
const char* to_string(WrefMode m);

/// Rotation amount of a rotate_wref step: explicit degrees, or alignment
/// toward / away from the target.
struct WrefAmount {
    enum class Kind { degrees, fixed_towards, fixed_back };
    Kind kind = Kind::degrees;
    double degrees = 0.0;

    bool operator==(const WrefAmount&) const = default;
};

struct RotateSelf {
    int obj = 0;
    LocalAxis axis = LocalAxis::z;
    double degrees = 0.0;
    bool operator==(const RotateSelf&) const = default;
};

struct RotateWref {
    int obj = 0;
    int target = 0;
    WrefMode mode = WrefMode::pitch;
    WrefAmount amount;
    bool operator==(const RotateWref&) const = default;
};

struct TranslateTarObj {
    int obj = 0;
    int target = 0;
    double offset[3] = {0, 0, 0};  // along the target's local x, y, z, in cm
    bool operator==(const TranslateTarObj&) const = default;
};

struct TranslateDirecAxis {
    int obj = 0;
    int ref1 = 0;
    int ref2 = 0;
    double distance = 0.0;  // cm along ref1 -> ref2, positive moves closer
    bool operator==(const TranslateDirecAxis&) const = default;
};

using PlanStep = std::variant<RotateSelf, RotateWref, TranslateTarObj, TranslateDirecAxis>;

struct PlanProgram {
    std::string task_name;
    int manipulating_id = -1;
    int interacting_id = -1;
    std::vector<PlanStep> steps;

    bool operator==(const PlanProgram&) const = default;
};

class PlanParseError : public std::runtime_error {
public:
    PlanParseError(int line, std::string token, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message +
                             (token.empty() ? "" : " ('" + token + "')")),
          line_(line),
          token_(std::move(token)) {}

    int line() const { return line_; }
    const std::string& token() const { return token_; }

private:
    int line_;
    std::string token_;
};

/// Parse one motion-plan program: header lines (Task Name / Manipulating obj
/// idx / Interacting obj idx, case-insensitive; Description and Motion
/// Planning lines are tolerated and skipped) followed by numbered steps in the
/// four fixed sentence shapes. "Obj" and "Object" are interchangeable, an
/// optional "opname:" label may precede each sentence, step numbers may leave
/// gaps but must increase.
PlanProgram parse_plan(const std::string& text);

/// Canonical rendering; parse_plan(format_plan(p)) == p.
std::string format_plan(const PlanProgram& program);

}  // namespace scene3d
