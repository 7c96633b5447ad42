#include "doctest.h"

#include "scene3d/plan_dsl.hpp"
#include "scene3d/rng.hpp"

using namespace scene3d;

TEST_SUITE("plan_dsl") {

TEST_CASE("can-to-bowl program parses to the expected AST") {
    const std::string text =
        "Task Name: Can to Bowl Transfer\n"
        "Manipulating obj idx: 3\n"
        "Interacting obj idx: 4\n"
        "1. Move Manipulating Obj [3] to [6, 0, 7] cm relative to Target Obj [4]'s local "
        "[x, y, z] axes.\n"
        "2. rotate_wref: Rotate Manipulating Obj [3] relative to Target Obj [4] around [pitch] "
        "axis by [75] degrees.\n";
    const PlanProgram p = parse_plan(text);
    CHECK(p.task_name == "Can to Bowl Transfer");
    CHECK(p.manipulating_id == 3);
    CHECK(p.interacting_id == 4);
    REQUIRE(p.steps.size() == 2);

    const auto& s0 = std::get<TranslateTarObj>(p.steps[0]);
    CHECK(s0.obj == 3);
    CHECK(s0.target == 4);
    CHECK(s0.offset[0] == 6.0);
    CHECK(s0.offset[1] == 0.0);
    CHECK(s0.offset[2] == 7.0);

    const auto& s1 = std::get<RotateWref>(p.steps[1]);
    CHECK(s1.obj == 3);
    CHECK(s1.target == 4);
    CHECK(s1.mode == WrefMode::pitch);
    CHECK(s1.amount.kind == WrefAmount::Kind::degrees);
    CHECK(s1.amount.degrees == 75.0);
}

TEST_CASE("bear rotation with category/description/planning lines") {
    const std::string text =
        "Task Category: Bear rotation\n"
        "Description: Rotate the toy bear 90 degrees on its vertical axis.\n"
        "Motion Planning: \n"
        "Manipulating obj idx: 5\n"
        "Interacting obj idx: 5\n"
        "1. rotate_self: Rotate Manipulating Object [5] around its local axis [z] by [90] "
        "degrees.\n";
    const PlanProgram p = parse_plan(text);
    CHECK(p.task_name == "Bear rotation");
    CHECK(p.manipulating_id == 5);
    CHECK(p.interacting_id == 5);  // pure rotation tasks may repeat the id
    REQUIRE(p.steps.size() == 1);
    const auto& s = std::get<RotateSelf>(p.steps[0]);
    CHECK(s.obj == 5);
    CHECK(s.axis == LocalAxis::z);
    CHECK(s.degrees == 90.0);
}

TEST_CASE("screwdriver program: fixed_towards and roll") {
    const std::string text =
        "Task Name: Screwdriver penetration\n"
        "Manipulating obj idx: 2\n"
        "Interacting obj idx: 6\n"
        "1. translate_tar_obj: Move Manipulating Object [2] to [-5, -5, 0] cm relative to "
        "Target Object [6]'s local [x, y, z] axes.\n"
        "2. rotate_wref: Rotate Manipulating Object [2] relative to Target Object [6] around "
        "[yaw] axis by [fixed_towards].\n"
        "3. rotate_wref: Rotate Manipulating Object [2] relative to Target Object [6] around "
        "[roll] axis by [360] degrees.\n";
    const PlanProgram p = parse_plan(text);
    REQUIRE(p.steps.size() == 3);
    CHECK(std::get<TranslateTarObj>(p.steps[0]).offset[0] == -5.0);
    const auto& s1 = std::get<RotateWref>(p.steps[1]);
    CHECK(s1.mode == WrefMode::yaw);
    CHECK(s1.amount.kind == WrefAmount::Kind::fixed_towards);
    const auto& s2 = std::get<RotateWref>(p.steps[2]);
    CHECK(s2.mode == WrefMode::roll);
    CHECK(s2.amount.degrees == 360.0);
}

TEST_CASE("translate_direc_axis sentence") {
    const std::string text =
        "Task Name: Can Relocation\n"
        "Manipulating obj idx: 5\n"
        "Interacting obj idx: 2\n"
        "1. translate_direc_axis: Move Manipulating Object [5] [-3] cm along the directional "
        "vector from Reference Object [1] to Reference Object [2].\n";
    const PlanProgram p = parse_plan(text);
    const auto& s = std::get<TranslateDirecAxis>(p.steps[0]);
    CHECK(s.obj == 5);
    CHECK(s.distance == -3.0);
    CHECK(s.ref1 == 1);
    CHECK(s.ref2 == 2);
}

TEST_CASE("surface tolerance: spacing, periods, obj variants, case") {
    const std::string text =
        "task name:   Wobbly   Formatting\n"
        "MANIPULATING OBJ IDX: 0\n"
        "Interacting object idx: 1\n"
        "2.  Move  Manipulating  Object [0]  to [1.5,-2, 0.25] cm relative to Target Obj "
        "[1]'s local [ x , y , z ] axes\n"
        "7. Rotate Manipulating Obj [0] around its local axis [y] by [-12.5] degrees.\n";
    const PlanProgram p = parse_plan(text);
    CHECK(p.task_name == "Wobbly   Formatting");
    REQUIRE(p.steps.size() == 2);
    const auto& s0 = std::get<TranslateTarObj>(p.steps[0]);
    CHECK(s0.offset[0] == 1.5);
    CHECK(s0.offset[1] == -2.0);
    CHECK(s0.offset[2] == 0.25);
    const auto& s1 = std::get<RotateSelf>(p.steps[1]);
    CHECK(s1.axis == LocalAxis::y);
    CHECK(s1.degrees == -12.5);
}

TEST_CASE("fixed amount spelling variants") {
    for (const std::string spelling : {"fixed_towards", "Fixed-Towards", "FIXEDTOWARDS"}) {
        const std::string text =
            "Task Name: T\nManipulating obj idx: 0\nInteracting obj idx: 1\n"
            "1. Rotate Manipulating Obj [0] relative to Target Obj [1] around [pitch] axis "
            "by [" + spelling + "].\n";
        const auto& s = std::get<RotateWref>(parse_plan(text).steps[0]);
        CHECK(s.amount.kind == WrefAmount::Kind::fixed_towards);
    }
    const std::string back =
        "Task Name: T\nManipulating obj idx: 0\nInteracting obj idx: 1\n"
        "1. Rotate Manipulating Obj [0] relative to Target Obj [1] around [yaw] axis by "
        "[fixed_back].\n";
    CHECK(std::get<RotateWref>(parse_plan(back).steps[0]).amount.kind ==
          WrefAmount::Kind::fixed_back);
}

TEST_CASE("parse errors carry line numbers and tokens") {
    auto expect_error_line = [](const std::string& text, int line) {
        try {
            parse_plan(text);
            FAIL("expected a parse error");
        } catch (const PlanParseError& e) {
            CHECK(e.line() == line);
        }
    };

    // Unknown op name.
    expect_error_line(
        "Task Name: T\nManipulating obj idx: 0\nInteracting obj idx: 1\n"
        "1. rotate_everything: Rotate Manipulating Obj [0] around its local axis [z] by [5] "
        "degrees.\n",
        4);

    // Nonmonotonic numbering (gaps are fine; going backwards is not).
    expect_error_line(
        "Task Name: T\nManipulating obj idx: 0\nInteracting obj idx: 1\n"
        "2. Rotate Manipulating Obj [0] around its local axis [z] by [5] degrees.\n"
        "1. Rotate Manipulating Obj [0] around its local axis [z] by [5] degrees.\n",
        5);

    // Reference indices must differ.
    expect_error_line(
        "Task Name: T\nManipulating obj idx: 0\nInteracting obj idx: 1\n"
        "1. Move Manipulating Obj [0] [4] cm along the directional vector from Reference "
        "Object [2] to Reference Object [2].\n",
        4);

    // Malformed bracket payload.
    expect_error_line(
        "Task Name: T\nManipulating obj idx: 0\nInteracting obj idx: 1\n"
        "1. Rotate Manipulating Obj [0] around its local axis [w] by [5] degrees.\n",
        4);

    // Missing header field.
    CHECK_THROWS_AS(parse_plan("Task Name: T\nManipulating obj idx: 0\n"
                               "1. Rotate Manipulating Obj [0] around its local axis [z] by "
                               "[5] degrees.\n"),
                    PlanParseError);

    // Unknown line outside the grammar.
    CHECK_THROWS_AS(parse_plan("Task Name: T\nManipulating obj idx: 0\n"
                               "Interacting obj idx: 1\nplease rotate the can\n"),
                    PlanParseError);

    // Gaps in numbering are tolerated.
    CHECK_NOTHROW(parse_plan("Task Name: T\nManipulating obj idx: 0\nInteracting obj idx: 1\n"
                             "1. Rotate Manipulating Obj [0] around its local axis [z] by [5] "
                             "degrees.\n"
                             "5. Rotate Manipulating Obj [0] around its local axis [x] by [5] "
                             "degrees.\n"));
}

TEST_CASE("format/parse round trip on generated programs") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        PlanProgram p;
        p.task_name = "Task " + std::to_string(trial);
        p.manipulating_id = static_cast<int>(rng.uniform_index(8));
        p.interacting_id = static_cast<int>(rng.uniform_index(8));
        const int n = 1 + static_cast<int>(rng.uniform_index(5));
        for (int i = 0; i < n; ++i) {
            auto random_value = [&]() {
                // Mix of integers and irrational-ish doubles.
                if (rng.uniform01() < 0.5)
                    return static_cast<double>(static_cast<int>(rng.uniform_index(361)) - 180);
                return rng.uniform(-50.0, 50.0);
            };
            switch (rng.uniform_index(4)) {
                case 0: {
                    RotateSelf s;
                    s.obj = p.manipulating_id;
                    s.axis = static_cast<LocalAxis>(rng.uniform_index(3));
                    s.degrees = random_value();
                    p.steps.emplace_back(s);
                    break;
                }
                case 1: {
                    RotateWref s;
                    s.obj = p.manipulating_id;
                    s.target = static_cast<int>(rng.uniform_index(8));
                    s.mode = static_cast<WrefMode>(rng.uniform_index(3));
                    switch (rng.uniform_index(3)) {
                        case 0:
                            s.amount = {WrefAmount::Kind::degrees, random_value()};
                            break;
                        case 1:
                            s.amount = {WrefAmount::Kind::fixed_towards, 0.0};
                            break;
                        default:
                            s.amount = {WrefAmount::Kind::fixed_back, 0.0};
                            break;
                    }
                    p.steps.emplace_back(s);
                    break;
                }
                case 2: {
                    TranslateTarObj s;
                    s.obj = p.manipulating_id;
                    s.target = static_cast<int>(rng.uniform_index(8));
                    for (double& v : s.offset) v = random_value();
                    p.steps.emplace_back(s);
                    break;
                }
                default: {
                    TranslateDirecAxis s;
                    s.obj = p.manipulating_id;
                    s.ref1 = static_cast<int>(rng.uniform_index(8));
                    s.ref2 = (s.ref1 + 1 + static_cast<int>(rng.uniform_index(7))) % 8;
                    s.distance = random_value();
                    p.steps.emplace_back(s);
                    break;
                }
            }
        }
        const std::string text = format_plan(p);
        const PlanProgram back = parse_plan(text);
        CHECK(back == p);
        // The canonical form is a fixed point of format(parse(.)).
        CHECK(format_plan(back) == text);
    }
}

}  // TEST_SUITE
