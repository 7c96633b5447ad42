#include "scene3d/plan_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "scene3d/text_format.hpp"

namespace scene3d {

const char* to_string(LocalAxis a) {
    switch (a) {
        case LocalAxis::x: return "x";
        case LocalAxis::y: return "y";
        case LocalAxis::z: return "z";
    }
    return "z";
}

const char* to_string(WrefMode m) {
    switch (m) {
        case WrefMode::pitch: return "pitch";
        case WrefMode::yaw: return "yaw";
        case WrefMode::roll: return "roll";
    }
    return "pitch";
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Skeleton = sentence with every bracketed payload replaced by \x01,
// lowercased, whitespace collapsed, "object" mapped to "obj", trailing
// periods removed.
struct Sentence {
    std::string skeleton;
    std::vector<std::string> payloads;
};

Sentence dissect(const std::string& line, int line_no) {
    Sentence out;
    std::string raw;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '[') {
            const size_t close = line.find(']', i);
            if (close == std::string::npos)
                throw PlanParseError(line_no, "[", "unterminated bracket");
            out.payloads.push_back(trim(line.substr(i + 1, close - i - 1)));
            raw += '\x01';
            i = close + 1;
        } else {
            raw += line[i];
            ++i;
        }
    }
    raw = lower(raw);
    // Collapse whitespace, tokenizing on spaces to normalize obj/object.
    std::istringstream ss(raw);
    std::string tok;
    std::string norm;
    while (ss >> tok) {
        while (!tok.empty() && tok.back() == '.') tok.pop_back();
        if (tok.empty()) continue;
        if (tok == "object") tok = "obj";
        if (tok.rfind("object'", 0) == 0) tok = "obj" + tok.substr(6);
        if (!norm.empty()) norm += ' ';
        norm += tok;
    }
    out.skeleton = norm;
    return out;
}

LocalAxis parse_axis(const std::string& s, int line_no) {
    const std::string t = lower(trim(s));
    if (t == "x") return LocalAxis::x;
    if (t == "y") return LocalAxis::y;
    if (t == "z") return LocalAxis::z;
    throw PlanParseError(line_no, s, "expected axis x, y or z");
}

WrefMode parse_mode(const std::string& s, int line_no) {
    const std::string t = lower(trim(s));
    if (t == "pitch") return WrefMode::pitch;
    if (t == "yaw") return WrefMode::yaw;
    if (t == "roll") return WrefMode::roll;
    throw PlanParseError(line_no, s, "expected pitch, yaw or roll");
}

int parse_index(const std::string& s, int line_no) {
    try {
        return parse_int(trim(s));
    } catch (const std::exception&) {
        throw PlanParseError(line_no, s, "expected an object index");
    }
}

double parse_number(const std::string& s, int line_no) {
    try {
        return parse_double(trim(s));
    } catch (const std::exception&) {
        throw PlanParseError(line_no, s, "expected a number");
    }
}

std::optional<WrefAmount> parse_fixed_amount(const std::string& s) {
    // fixed_towards / fixed-towards / fixedtowards, case-insensitive.
    std::string t;
    for (char c : lower(trim(s)))
        if (c != '_' && c != '-') t += c;
    if (t == "fixedtowards") return WrefAmount{WrefAmount::Kind::fixed_towards, 0.0};
    if (t == "fixedback") return WrefAmount{WrefAmount::Kind::fixed_back, 0.0};
    return std::nullopt;
}

void parse_offset_triple(const std::string& s, double out[3], int line_no) {
    std::istringstream ss(s);
    std::string part;
    int n = 0;
    while (std::getline(ss, part, ',')) {
        if (n >= 3) throw PlanParseError(line_no, s, "expected three offsets");
        out[n++] = parse_number(part, line_no);
    }
    if (n != 3) throw PlanParseError(line_no, s, "expected three offsets");
}

void expect_xyz_list(const std::string& s, int line_no) {
    std::string t;
    for (char c : lower(s))
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t != "x,y,z") throw PlanParseError(line_no, s, "expected the axis list x, y, z");
}

const char* op_name_of(const PlanStep& step) {
    if (std::holds_alternative<RotateSelf>(step)) return "rotate_self";
    if (std::holds_alternative<RotateWref>(step)) return "rotate_wref";
    if (std::holds_alternative<TranslateTarObj>(step)) return "translate_tar_obj";
    return "translate_direc_axis";
}

PlanStep parse_step_sentence(const std::string& sentence, int line_no) {
    const Sentence s = dissect(sentence, line_no);
    const auto& p = s.payloads;

    if (s.skeleton == "rotate manipulating obj \x01 around its local axis \x01 by \x01 degrees") {
        RotateSelf step;
        step.obj = parse_index(p[0], line_no);
        step.axis = parse_axis(p[1], line_no);
        step.degrees = parse_number(p[2], line_no);
        return step;
    }
    if (s.skeleton ==
            "rotate manipulating obj \x01 relative to target obj \x01 around \x01 axis by \x01 "
            "degrees" ||
        s.skeleton ==
            "rotate manipulating obj \x01 relative to target obj \x01 around \x01 axis by \x01") {
        RotateWref step;
        step.obj = parse_index(p[0], line_no);
        step.target = parse_index(p[1], line_no);
        step.mode = parse_mode(p[2], line_no);
        if (auto fixed = parse_fixed_amount(p[3])) {
            step.amount = *fixed;
        } else {
            step.amount.kind = WrefAmount::Kind::degrees;
            step.amount.degrees = parse_number(p[3], line_no);
        }
        return step;
    }
    if (s.skeleton ==
        "move manipulating obj \x01 to \x01 cm relative to target obj \x01's local \x01 axes") {
        TranslateTarObj step;
        step.obj = parse_index(p[0], line_no);
        parse_offset_triple(p[1], step.offset, line_no);
        step.target = parse_index(p[2], line_no);
        expect_xyz_list(p[3], line_no);
        return step;
    }
    if (s.skeleton ==
        "move manipulating obj \x01 \x01 cm along the directional vector from reference obj "
        "\x01 to reference obj \x01") {
        TranslateDirecAxis step;
        step.obj = parse_index(p[0], line_no);
        step.distance = parse_number(p[1], line_no);
        step.ref1 = parse_index(p[2], line_no);
        step.ref2 = parse_index(p[3], line_no);
        if (step.ref1 == step.ref2)
            throw PlanParseError(line_no, p[3], "reference object indices must differ");
        return step;
    }
    throw PlanParseError(line_no, sentence, "unrecognized manipulation sentence");
}

bool known_op_name(const std::string& name) {
    return name == "rotate_self" || name == "rotate_wref" || name == "translate_tar_obj" ||
           name == "translate_direc_axis";
}

}  // namespace

PlanProgram parse_plan(const std::string& text) {
    PlanProgram prog;
    bool have_name = false, have_manip = false, have_inter = false;
    int last_step_number = 0;

    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;

        // Header fields (case-insensitive key before ':').
        const size_t colon = t.find(':');
        if (colon != std::string::npos) {
            const std::string key = lower(trim(t.substr(0, colon)));
            const std::string value = trim(t.substr(colon + 1));
            if (key == "task name" || key == "task category") {
                prog.task_name = value;
                have_name = true;
                continue;
            }
            if (key == "manipulating obj idx" || key == "manipulating object idx") {
                prog.manipulating_id = parse_index(value, line_no);
                have_manip = true;
                continue;
            }
            if (key == "interacting obj idx" || key == "interacting object idx") {
                prog.interacting_id = parse_index(value, line_no);
                have_inter = true;
                continue;
            }
            if (key == "description" || key == "motion planning") continue;
        }

        // Numbered step: "N." prefix.
        size_t pos = 0;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
        if (pos == 0 || pos >= t.size() || t[pos] != '.')
            throw PlanParseError(line_no, t.substr(0, t.find(' ')),
                                 "expected a header field or a numbered step");
        const int number = parse_index(t.substr(0, pos), line_no);
        if (number <= last_step_number)
            throw PlanParseError(line_no, t.substr(0, pos),
                                 "step numbers must increase (gaps are fine)");
        last_step_number = number;

        std::string rest = trim(t.substr(pos + 1));

        // Optional "opname:" label.
        std::string label;
        const size_t label_colon = rest.find(':');
        if (label_colon != std::string::npos) {
            const std::string candidate = lower(trim(rest.substr(0, label_colon)));
            if (known_op_name(candidate)) {
                label = candidate;
                rest = trim(rest.substr(label_colon + 1));
            } else if (candidate.find(' ') == std::string::npos) {
                throw PlanParseError(line_no, candidate, "unknown manipulation name");
            }
        }

        PlanStep step = parse_step_sentence(rest, line_no);
        if (!label.empty() && label != op_name_of(step))
            throw PlanParseError(line_no, label, "label does not match the sentence");
        prog.steps.push_back(std::move(step));
    }

    if (!have_name) throw PlanParseError(line_no, "", "missing header field: Task Name");
    if (!have_manip)
        throw PlanParseError(line_no, "", "missing header field: Manipulating obj idx");
    if (!have_inter)
        throw PlanParseError(line_no, "", "missing header field: Interacting obj idx");
    if (prog.steps.empty()) throw PlanParseError(line_no, "", "program has no steps");
    if (prog.manipulating_id < 0 || prog.interacting_id < 0)
        throw PlanParseError(line_no, "", "object indices must be >= 0");
    return prog;
}

std::string format_plan(const PlanProgram& program) {
    std::ostringstream out;
    out << "Task Name: " << program.task_name << "\n";
    out << "Manipulating obj idx: " << program.manipulating_id << "\n";
    out << "Interacting obj idx: " << program.interacting_id << "\n";
    int n = 0;
    for (const auto& step : program.steps) {
        out << ++n << ". ";
        if (const auto* rs = std::get_if<RotateSelf>(&step)) {
            out << "rotate_self: Rotate Manipulating Object [" << rs->obj
                << "] around its local axis [" << to_string(rs->axis) << "] by ["
                << format_double(rs->degrees) << "] degrees.";
        } else if (const auto* rw = std::get_if<RotateWref>(&step)) {
            out << "rotate_wref: Rotate Manipulating Object [" << rw->obj
                << "] relative to Target Object [" << rw->target << "] around ["
                << to_string(rw->mode) << "] axis by [";
            switch (rw->amount.kind) {
                case WrefAmount::Kind::degrees:
                    out << format_double(rw->amount.degrees) << "] degrees.";
                    break;
                case WrefAmount::Kind::fixed_towards:
                    out << "fixed_towards].";
                    break;
                case WrefAmount::Kind::fixed_back:
                    out << "fixed_back].";
                    break;
            }
        } else if (const auto* tt = std::get_if<TranslateTarObj>(&step)) {
            out << "translate_tar_obj: Move Manipulating Object [" << tt->obj << "] to ["
                << format_double(tt->offset[0]) << ", " << format_double(tt->offset[1]) << ", "
                << format_double(tt->offset[2]) << "] cm relative to Target Object ["
                << tt->target << "]'s local [x, y, z] axes.";
        } else if (const auto* td = std::get_if<TranslateDirecAxis>(&step)) {
            out << "translate_direc_axis: Move Manipulating Object [" << td->obj << "] ["
                << format_double(td->distance)
                << "] cm along the directional vector from Reference Object [" << td->ref1
                << "] to Reference Object [" << td->ref2 << "].";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace scene3d
