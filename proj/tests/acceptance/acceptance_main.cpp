// Acceptance suite: exercises every documented scenario and property at its
// stated tolerance and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cpmx/catalog.hpp"
#include "cpmx/configuration.hpp"
#include "cpmx/constraints.hpp"
#include "cpmx/errors.hpp"
#include "cpmx/evolution.hpp"
#include "cpmx/io.hpp"
#include "cpmx/secondary.hpp"
#include "cpmx/trace.hpp"
#include "cpmx/validate.hpp"
#include "support/build.hpp"
#include "support/common.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace cpmx;
using nlohmann::json;
using cpmx::testing::Gen;
using cpmx::testing::GenOptions;
using cpmx::testing::load_fixture;
using cpmx::testing::load_fixture_json;

namespace {

int failures = 0;

struct Outcome {
    bool ok = true;
    std::ostringstream detail;
};

void report(int number, const std::string& title, const Outcome& outcome, double seconds,
            double budget_seconds) {
    bool ok = outcome.ok && seconds <= budget_seconds;
    std::printf("%s  %2d  %s (%.2fs)\n", ok ? "PASS" : "FAIL", number, title.c_str(), seconds);
    if (!ok) {
        ++failures;
        std::string detail = outcome.detail.str();
        if (!detail.empty()) std::printf("          %s\n", detail.c_str());
        if (seconds > budget_seconds)
            std::printf("          exceeded the %.0fs budget\n", budget_seconds);
    }
}

void run(int number, const std::string& title, double budget_seconds,
         const std::function<void(Outcome&)>& body) {
    Outcome outcome;
    auto start = std::chrono::steady_clock::now();
    try {
        body(outcome);
    } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.detail << "exception: " << e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(number, title, outcome, seconds, budget_seconds);
}

void expect(Outcome& outcome, bool condition, const std::string& what) {
    if (!condition) {
        outcome.ok = false;
        if (outcome.detail.tellp() > 0) outcome.detail << "; ";
        outcome.detail << what;
    }
}

void expect_same_model(Outcome& outcome, const Model& actual, const Model& expected,
                       const std::string& what) {
    if (canonical_hash(actual) == canonical_hash(expected)) return;
    outcome.ok = false;
    outcome.detail << what << ": models differ:";
    for (const Edit& edit : model_diff(expected, actual))
        outcome.detail << " " << edit_to_json(edit).dump();
}

// retries random draws until one applies cleanly
ApplyResult random_successful_application(Gen& gen, const Model& model) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        auto [pattern, params] = gen.random_application(model);
        try {
            return apply_pattern(model, pattern, params);
        } catch (const Error&) {
        }
    }
    throw std::runtime_error("no admissible application found in 200 draws");
}

unsigned long long expected_factor(const std::string& type_label, std::size_t variant_count) {
    return type_label == "alternative" ? variant_count : variant_count + 1;
}

} // namespace

int main() {
    run(1, "variation point insertion reproduces its documented application", 1.0, [](Outcome& o) {
        Model before = load_fixture("insert_vp_before.json");
        ApplyResult result = apply_pattern(before, "vpai", load_fixture_json("insert_vp_params.json"));
        expect_same_model(o, result.model, load_fixture("insert_vp_after.json"), "insertion result");
        expect(o, validate_model(result.model).ok(), "result must validate");
    });

    run(2, "variation point substitution reproduces both design choices", 2.0, [](Outcome& o) {
        // each design choice carries its own one-second budget
        auto timed = [&](const char* what, const char* before, const char* params,
                         const char* after) {
            auto start = std::chrono::steady_clock::now();
            Model base = load_fixture(before);
            ApplyResult result = apply_pattern(base, "vpas", load_fixture_json(params));
            expect_same_model(o, result.model, load_fixture(after), what);
            double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            expect(o, seconds < 1.0, std::string(what) + " exceeded its one-second budget");
        };
        timed("substitution by a new node", "substitute_vp_new_before.json",
              "substitute_vp_new_params.json", "substitute_vp_new_after.json");
        timed("substitution by an existing activity", "substitute_vp_existing_before.json",
              "substitute_vp_existing_params.json", "substitute_vp_existing_after.json");
    });

    run(3, "each evolution constraint has a passing and a failing scenario", 5.0, [](Outcome& o) {
        Model insertion_base = load_fixture("insert_vp_before.json");
        json vpai_ok = load_fixture_json("insert_vp_params.json");
        json vpai_bad = vpai_ok;
        vpai_bad["variants"] = json::array();

        Model tiny = cpmx::testing::tiny_vp_model();
        Model entangled = tiny;
        entangled.activities.emplace("B", [] {
            Activity b;
            b.id = "B";
            b.name = "B";
            b.role = VariationPointRole{"optional"};
            return b;
        }());
        entangled.activities.emplace("B1", [] {
            Activity b1;
            b1.id = "B1";
            b1.name = "B1";
            b1.role = VariantRole{"B", std::nullopt};
            return b1;
        }());
        entangled.flows.erase(FlowKey{"A", "end"});
        entangled.flows[FlowKey{"A", "B"}] = std::nullopt;
        entangled.flows[FlowKey{"B", "end"}] = std::nullopt;
        entangled.vccs.insert(Vcc{"B1", VccRelation::requires_presence, "A1"});

        struct Scenario {
            int constraint;     // 0-based index into the report
            const char* name;
            Model* model;
            const char* pattern;
            json params;
            bool expect_violation;
        };
        json keep_all{{"old_vp", "A"},
                      {"substitute", json{{"new", json{{"id", "S"}}}}},
                      {"vp_type", "alternative"},
                      {"dispositions",
                       json{{"A1", json{{"action", "keep"}}}, {"A2", json{{"action", "keep"}}}}}};
        json drop_all{{"old_vp", "A"},
                      {"substitute", json{{"new", json{{"id", "S"}}}}},
                      {"vp_type", "alternative"},
                      {"dispositions",
                       json{{"A1", json{{"action", "delete"}}}, {"A2", json{{"action", "delete"}}}}}};
        Model required = tiny;
        required.vccs.insert(Vcc{"A1", VccRelation::requires_presence, "A2"});

        std::vector<Scenario> scenarios{
            {0, "EC1 pass", &insertion_base, "vpai", vpai_ok, false},
            {0, "EC1 fail", &insertion_base, "vpai", vpai_bad, true},
            {1, "EC2 pass", &tiny, "vai", json{{"vp_id", "A"}, {"variant", json{{"id", "A3"}}}}, false},
            {1, "EC2 fail", &insertion_base, "vai",
             json{{"vp_id", "A"}, {"variant", json{{"id", "A3"}}}}, true}, // A is plain there
            {2, "EC3 pass", &tiny, "vpas", keep_all, false},
            {2, "EC3 fail", &tiny, "vpas", drop_all, true},
            {3, "EC4 pass", &tiny, "vpad", json{{"vp_id", "A"}}, false},
            {3, "EC4 fail", &entangled, "vpad", json{{"vp_id", "A"}}, true},
            {4, "EC5 pass", &tiny, "vad", json{{"variant_id", "A1"}}, false},
            {4, "EC5 fail", &required, "vad", json{{"variant_id", "A2"}}, true},
        };
        for (const Scenario& scenario : scenarios) {
            EvolutionConstraintReport report =
                check_evolution_constraints(*scenario.model, scenario.pattern, scenario.params);
            const auto& item = report.items[static_cast<std::size_t>(scenario.constraint)];
            if (scenario.expect_violation) {
                expect(o, item.status == EcStatus::violated,
                       std::string(scenario.name) + ": expected a violation");
                expect(o, !item.offenders.empty(),
                       std::string(scenario.name) + ": violations must name offenders");
                expect(o, item.id == "EC" + std::to_string(scenario.constraint + 1),
                       std::string(scenario.name) + ": wrong constraint id");
            } else {
                expect(o, item.status == EcStatus::satisfied,
                       std::string(scenario.name) + ": expected satisfied");
            }
        }
    });

    run(4, "500 random applications validate clean or leave the input untouched", 30.0,
        [](Outcome& o) {
            Gen gen(20260808);
            GenOptions options;
            options.max_chain = 8;
            options.max_vps = 6;
            options.with_vccs = true;
            Model model = gen.random_model(options);
            int successes = 0, rejections = 0;
            for (int i = 0; i < 500; ++i) {
                if (i % 25 == 0) {
                    do {
                        model = gen.random_model(options);
                    } while (!validate_model(model).ok());
                }
                auto [pattern, params] = gen.random_application(model);
                std::string before_hash = canonical_hash(model);
                try {
                    ApplyResult result = apply_pattern(model, pattern, params);
                    ++successes;
                    if (!validate_model(result.model).ok()) {
                        expect(o, false, "application " + std::to_string(i) + " (" + pattern +
                                             ") produced an ill-formed model");
                        break;
                    }
                    model = result.model;
                } catch (const Error&) {
                    ++rejections;
                    if (canonical_hash(model) != before_hash) {
                        expect(o, false, "failed application " + std::to_string(i) +
                                             " mutated its input");
                        break;
                    }
                }
            }
            expect(o, successes > 100, "too few successful applications: " +
                                           std::to_string(successes));
            expect(o, rejections > 10, "too few rejected applications: " + std::to_string(rejections));
        });

    run(5, "enumeration matches the closed form and evolution scales it exactly", 30.0,
        [](Outcome& o) {
            Gen gen(5150);
            GenOptions options;
            options.max_chain = 5;
            options.max_vps = 4;
            options.with_vccs = false; // the closed form speaks about constraint-free models
            int checked = 0;
            for (int round = 0; round < 100; ++round) {
                Model m = gen.random_model(options);
                if (!validate_model(m).ok()) continue;
                ++checked;
                unsigned long long count = enumerate_configurations(m).size();
                unsigned long long closed = cpmx::testing::closed_form_count(m);
                if (count != closed) {
                    expect(o, false, "count " + std::to_string(count) + " != closed form " +
                                         std::to_string(closed));
                    break;
                }

                // a fresh optional variation point multiplies by variants + 1
                int new_variants = gen.pick(1, 3);
                VpaiParams insertion;
                insertion.new_vp = NodeSpec{"acc-vp", "acc-vp"};
                insertion.position = [&] {
                    for (const auto& [key, condition] : m.flows) return key;
                    return FlowKey{m.start_node, m.end_node};
                }();
                insertion.vp_type = gen.chance(0.5) ? VpType::optional : VpType::alternative;
                for (int i = 0; i < new_variants; ++i)
                    insertion.variants.push_back(VariantActivitySpec{
                        "acc-v" + std::to_string(i), "acc-v" + std::to_string(i), std::nullopt, {}, {}});
                m.max_activities = flow_eligible_activity_count(m) + 3; // capacity is not under test here
                Model grown = vpai(m, insertion).model;
                unsigned long long factor =
                    expected_factor(std::string(vp_type_label(insertion.vp_type)),
                                    insertion.variants.size());
                unsigned long long grown_count = enumerate_configurations(grown).size();
                if (grown_count != count * factor) {
                    expect(o, false, "insertion scaled " + std::to_string(count) + " to " +
                                         std::to_string(grown_count) + ", expected factor " +
                                         std::to_string(factor));
                    break;
                }

                // a variant insertion moves one variation point's factor up by one
                std::string vp_id = "acc-vp";
                std::string type_label = std::string(vp_type_label(insertion.vp_type));
                VaiParams vai_params{vp_id, std::nullopt,
                                     VariantActivitySpec{"acc-extra", "acc-extra", std::nullopt, {}, {}}};
                Model more = variant_activity_insert(grown, vai_params).model;
                unsigned long long more_count = enumerate_configurations(more).size();
                unsigned long long scaled = grown_count / expected_factor(type_label, new_variants) *
                                            expected_factor(type_label, new_variants + 1);
                if (more_count != scaled) {
                    expect(o, false, "variant insertion scaled to " + std::to_string(more_count) +
                                         ", expected " + std::to_string(scaled));
                    break;
                }

                // deleting the variant and then the variation point undoes both factors
                Model fewer = variant_activity_delete(more, "acc-extra").model;
                if (enumerate_configurations(fewer).size() != grown_count) {
                    expect(o, false, "variant deletion did not divide the count back");
                    break;
                }
                Model pruned = vp_activity_delete(fewer, vp_id).model;
                if (enumerate_configurations(pruned).size() != count) {
                    expect(o, false, "variation point deletion did not divide the count back");
                    break;
                }
            }
            expect(o, checked >= 100, "only " + std::to_string(checked) + " models checked");
        });

    run(6, "every configuration of the scenario results derives a sound plain model", 10.0,
        [](Outcome& o) {
            for (const char* name : {"insert_vp_after.json", "substitute_vp_new_after.json",
                                     "substitute_vp_existing_after.json"}) {
                Model m = load_fixture(name);
                auto configs = enumerate_configurations(m);
                expect(o, !configs.empty(), std::string(name) + ": nothing to derive");
                for (const Configuration& config : configs) {
                    Model derived = derive_variant(m, config);
                    for (const auto& [id, activity] : derived.activities)
                        expect(o, is_plain(activity.role),
                               std::string(name) + ": derived activity '" + id + "' keeps variability");
                    for (const auto& [id, resource] : derived.resources)
                        expect(o, is_plain(resource.role),
                               std::string(name) + ": derived resource '" + id + "' keeps variability");
                    for (const auto& [id, data] : derived.data_objects)
                        expect(o, is_plain(data.role),
                               std::string(name) + ": derived data '" + id + "' keeps variability");
                    expect(o, validate_model(derived).ok(),
                           std::string(name) + ": derived model must validate");
                }
            }
        });

    run(7, "replay reproduces live evolution and undo rewinds it, byte for byte", 30.0,
        [](Outcome& o) {
            Gen gen(7777);
            GenOptions options;
            options.max_chain = 4;
            options.max_vps = 3;
            for (int sequence = 0; sequence < 100; ++sequence) {
                Model initial = gen.random_model(options);
                if (!validate_model(initial).ok()) continue;

                Model live = initial;
                EvolutionTrace trace;
                int steps = gen.pick(2, 5);
                for (int step = 0; step < steps; ++step) {
                    ApplyResult result = random_successful_application(gen, live);
                    trace = record(std::move(trace), result.entry);
                    live = result.model;
                }

                Model replayed = replay(initial, trace);
                if (save_model(replayed) != save_model(live)) {
                    expect(o, false, "sequence " + std::to_string(sequence) +
                                         ": replay diverged from the live run");
                    break;
                }

                Model rewound = live;
                EvolutionTrace remaining = trace;
                while (!remaining.empty()) {
                    auto [prev, shorter] = undo(rewound, remaining);
                    rewound = std::move(prev);
                    remaining = std::move(shorter);
                }
                if (save_model(rewound) != save_model(initial)) {
                    expect(o, false, "sequence " + std::to_string(sequence) +
                                         ": undoing everything missed the initial model");
                    break;
                }
            }
        });

    run(8, "each well-formedness rule has a minimal fixture triggering exactly it", 5.0,
        [](Outcome& o) {
            for (int i = 1; i <= 10; ++i) {
                std::string rule = "W" + std::to_string(i);
                Model m = load_fixture("w" + std::to_string(i) + ".json");
                std::set<std::string> rules;
                for (const Violation& violation : validate_model(m).violations)
                    rules.insert(violation.rule);
                expect(o, rules == std::set<std::string>{rule},
                       rule + " fixture hit " + (rules.empty() ? std::string("nothing") : *rules.begin()));
            }
        });

    run(9, "the catalog exposes 18 concrete patterns with the documented relations", 1.0,
        [](Outcome& o) {
            int concrete = 0;
            for (const PatternDescriptor& d : list_patterns())
                if (!d.is_abstract) ++concrete;
            expect(o, concrete == 18, "concrete pattern count is " + std::to_string(concrete));

            const PatternDescriptor* vpai_entry = find_pattern("VPAI");
            expect(o, vpai_entry && vpai_entry->refines == std::string("AI"), "VPAI must refine AI");
            expect(o,
                   vpai_entry && std::set<std::string>(vpai_entry->uses.begin(),
                                                       vpai_entry->uses.end()) ==
                                     std::set<std::string>{"VAI", "DI", "RI"},
                   "VPAI must use VAI, DI, RI");

            const PatternDescriptor* vpas_entry = find_pattern("VPAS");
            expect(o, vpas_entry && vpas_entry->refines == std::string("AS"), "VPAS must refine AS");
            expect(o,
                   vpas_entry && std::set<std::string>(vpas_entry->uses.begin(),
                                                       vpas_entry->uses.end()) ==
                                     std::set<std::string>{"DS", "RS", "VAS", "VAI", "VAD"},
                   "VPAS must use DS, RS, VAS, VAI, VAD");
        });

    if (failures == 0) std::printf("all criteria passed\n");
    else std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
