// cpmx: evolve configurable process models with validated pattern
// applications, derive concrete variants, and keep a replayable trace.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpmx/catalog.hpp"
#include "cpmx/configuration.hpp"
#include "cpmx/constraints.hpp"
#include "cpmx/errors.hpp"
#include "cpmx/evolution.hpp"
#include "cpmx/io.hpp"
#include "cpmx/secondary.hpp"
#include "cpmx/trace.hpp"
#include "cpmx/validate.hpp"

namespace {

using cpmx::Errc;
using cpmx::Error;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_precondition = 2;
constexpr int exit_io = 3;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) cpmx::fail(Errc::parse_error, "cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// temp-then-rename so a failing command never leaves a partial file behind
void write_output(const std::string& path, const std::string& bytes) {
    if (path == "-") {
        std::cout << bytes;
        std::cout.flush();
        return;
    }
    std::filesystem::path target(path);
    std::filesystem::path temp = target;
    temp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) cpmx::fail(Errc::parse_error, "cannot open '" + temp.string() + "' for writing");
        out << bytes;
        if (!out.good()) cpmx::fail(Errc::parse_error, "write to '" + temp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(temp, target, ec);
    if (ec) {
        std::filesystem::remove(temp);
        cpmx::fail(Errc::parse_error, "cannot move output into place: " + ec.message());
    }
}

cpmx::Model load_model_file(const std::string& path) { return cpmx::load_model(read_input(path)); }

cpmx::EvolutionTrace load_trace_file(const std::string& path) {
    if (path != "-" && !std::filesystem::exists(path)) return {};
    return cpmx::trace_from_jsonl(read_input(path));
}

std::uint64_t enumeration_bound() {
    if (const char* raw = std::getenv("CPMX_ENUM_BOUND")) {
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(raw, &end, 10);
        if (end && *end == '\0' && parsed > 0) return parsed;
        cpmx::fail(Errc::parse_error, "CPMX_ENUM_BOUND must be a positive integer");
    }
    return cpmx::default_enumeration_bound;
}

cpmx::Configuration parse_selection(const std::string& raw) {
    // vp=variant,vp2=  (empty value: explicitly none)
    cpmx::Configuration config;
    std::istringstream stream(raw);
    std::string token;
    while (std::getline(stream, token, ',')) {
        if (token.empty()) continue;
        auto eq = token.find('=');
        if (eq == std::string::npos)
            cpmx::fail(Errc::parse_error, "selection entry '" + token + "' is not vp=variant");
        std::string vp = token.substr(0, eq);
        std::string variant = token.substr(eq + 1);
        config.selection[vp] = variant.empty() ? std::nullopt : std::optional<std::string>(variant);
    }
    return config;
}

int exit_code_for(Errc code) {
    switch (code) {
    case Errc::parse_error:
    case Errc::unsupported_version:
        return exit_io;
    default:
        return exit_precondition;
    }
}

void print_error(const Error& error) {
    json out{{"error", std::string(cpmx::errc_name(error.code()))}, {"message", error.what()}};
    if (!error.ids().empty()) out["ids"] = error.ids();
    std::cerr << out.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"configurable process model evolution"};
    app.require_subcommand(1);

    std::string model_path, params_path, out_path, trace_path, select_raw, target_id, pattern_id;
    bool count_only = false, as_dot = false, transitive = false;

    auto* validate_cmd = app.add_subcommand("validate", "check the well-formedness rules");
    validate_cmd->add_option("--model", model_path, "model file ('-' for stdin)")->required();

    auto* apply_cmd = app.add_subcommand("apply", "apply an evolution pattern");
    apply_cmd->add_option("pattern", pattern_id, "pattern id (vpai, vai, vpas, ...)")->required();
    apply_cmd->add_option("--model", model_path)->required();
    apply_cmd->add_option("--params", params_path, "JSON parameter file")->required();
    apply_cmd->add_option("--out", out_path, "where to write the evolved model")->required();
    apply_cmd->add_option("--trace", trace_path, "trace file to append to");

    auto* patterns_cmd = app.add_subcommand("patterns", "inspect the pattern catalog");
    auto* patterns_list = patterns_cmd->add_subcommand("list", "print every descriptor");
    auto* patterns_graph = patterns_cmd->add_subcommand("graph", "print the relation graph");
    patterns_graph->add_flag("--dot", as_dot, "emit DOT instead of JSON");
    patterns_cmd->require_subcommand(1);

    auto* applicable_cmd = app.add_subcommand("applicable", "which patterns apply here");
    applicable_cmd->add_option("--model", model_path)->required();
    applicable_cmd->add_option("--target", target_id, "optional element id");

    auto* audit_cmd = app.add_subcommand("audit", "constraint consistency report");
    audit_cmd->add_option("--model", model_path)->required();
    audit_cmd->add_flag("--transitive", transitive, "report transitive dependents");
    audit_cmd->add_option("--pattern", pattern_id, "proposed pattern id");
    audit_cmd->add_option("--params", params_path, "proposed pattern parameters");

    auto* configure_cmd = app.add_subcommand("configure", "derive a variant from a selection");
    configure_cmd->add_option("--model", model_path)->required();
    configure_cmd->add_option("--select", select_raw, "vp=variant,... ('' picks none)")->required();
    configure_cmd->add_option("--out", out_path)->required();

    auto* derive_cmd = app.add_subcommand("derive", "same as configure");
    derive_cmd->add_option("--model", model_path)->required();
    derive_cmd->add_option("--select", select_raw)->required();
    derive_cmd->add_option("--out", out_path)->required();

    auto* enumerate_cmd = app.add_subcommand("enumerate", "list the valid configurations");
    enumerate_cmd->add_option("--model", model_path)->required();
    enumerate_cmd->add_flag("--count-only", count_only, "print just the count");

    auto* trace_cmd = app.add_subcommand("trace", "inspect or replay a trace");
    auto* trace_show = trace_cmd->add_subcommand("show", "print the entries");
    trace_show->add_option("file", trace_path, "trace file")->required();
    auto* trace_replay = trace_cmd->add_subcommand("replay", "re-apply a trace to a model");
    trace_replay->add_option("--model", model_path)->required();
    trace_replay->add_option("--trace", trace_path)->required();
    trace_replay->add_option("--out", out_path)->required();
    auto* trace_undo = trace_cmd->add_subcommand("undo", "revert the last entry");
    trace_undo->add_option("--model", model_path)->required();
    trace_undo->add_option("--trace", trace_path)->required();
    trace_undo->add_option("--out", out_path, "write the restored model here instead of --model");
    trace_cmd->require_subcommand(1);

    auto* export_cmd = app.add_subcommand("export", "render the model as DOT");
    export_cmd->add_option("--model", model_path)->required();
    export_cmd->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        json out{{"error", "Usage"}, {"message", e.what()}};
        std::cerr << out.dump() << "\n";
        return exit_usage;
    }

    try {
        if (*validate_cmd) {
            cpmx::Model model = load_model_file(model_path);
            cpmx::ValidationReport report = cpmx::validate_model(model);
            json violations = json::array();
            for (const auto& violation : report.violations)
                violations.push_back(json{{"rule", violation.rule},
                                          {"ids", violation.ids},
                                          {"message", violation.message}});
            std::cout << json{{"violations", violations}}.dump(2) << "\n";
            return exit_ok;
        }

        if (*apply_cmd) {
            cpmx::Model model = load_model_file(model_path);
            json params;
            try {
                params = json::parse(read_input(params_path));
            } catch (const json::exception& e) {
                cpmx::fail(Errc::parse_error, std::string("params: ") + e.what());
            }
            cpmx::EvolutionTrace trace;
            if (!trace_path.empty()) trace = load_trace_file(trace_path);

            cpmx::ApplyResult result = cpmx::apply_pattern(model, pattern_id, params);
            if (!trace_path.empty()) {
                trace = cpmx::record(std::move(trace), result.entry);
                write_output(trace_path, cpmx::trace_to_jsonl(trace));
            }
            write_output(out_path, cpmx::save_model(result.model));
            std::cout << json{{"pattern", pattern_id},
                              {"pre_hash", result.entry.pre_hash},
                              {"post_hash", result.entry.post_hash},
                              {"edits", result.entry.edits.size()}}
                             .dump(2)
                      << "\n";
            return exit_ok;
        }

        if (*patterns_list) {
            std::cout << cpmx::catalog_to_json().dump(2) << "\n";
            return exit_ok;
        }
        if (*patterns_graph) {
            if (as_dot) {
                std::cout << cpmx::relations_dot();
            } else {
                cpmx::RelationGraph graph = cpmx::pattern_relations();
                json refines = json::array(), uses = json::array();
                for (const auto& [child, parent] : graph.refines_edges)
                    refines.push_back(json::array({child, parent}));
                for (const auto& [user, used] : graph.uses_edges)
                    uses.push_back(json::array({user, used}));
                std::cout << json{{"refines", refines}, {"uses", uses}}.dump(2) << "\n";
            }
            return exit_ok;
        }

        if (*applicable_cmd) {
            cpmx::Model model = load_model_file(model_path);
            std::optional<std::string> target;
            if (!target_id.empty()) target = target_id;
            auto verdicts = cpmx::applicable_patterns(model, target);
            std::cout << cpmx::verdicts_to_json(verdicts).dump(2) << "\n";
            return exit_ok;
        }

        if (*audit_cmd) {
            cpmx::Model model = load_model_file(model_path);
            json out;
            out["vcc_conflicts"] = cpmx::conflicts_to_json(
                cpmx::check_vcc_consistency(model, enumeration_bound()));
            if (transitive) {
                json dependents = json::object();
                for (const std::string& variant_id : cpmx::variant_ids(model)) {
                    auto ids = cpmx::variant_dependents(model, variant_id, true);
                    dependents[variant_id] = std::vector<std::string>(ids.begin(), ids.end());
                }
                out["transitive_dependents"] = dependents;
            }
            if (!pattern_id.empty()) {
                json params = json::object();
                if (!params_path.empty()) {
                    try {
                        params = json::parse(read_input(params_path));
                    } catch (const json::exception& e) {
                        cpmx::fail(Errc::parse_error, std::string("params: ") + e.what());
                    }
                }
                out.update(cpmx::report_to_json(
                    cpmx::check_evolution_constraints(model, pattern_id, params)));
            }
            std::cout << out.dump(2) << "\n";
            return exit_ok;
        }

        if (*configure_cmd || *derive_cmd) {
            cpmx::Model model = load_model_file(model_path);
            cpmx::Configuration config = parse_selection(select_raw);
            cpmx::Model derived = cpmx::derive_variant(model, config);
            write_output(out_path, cpmx::save_model(derived));
            std::cout << json{{"selection", cpmx::configuration_to_json(config)},
                              {"hash", cpmx::canonical_hash(derived)}}
                             .dump(2)
                      << "\n";
            return exit_ok;
        }

        if (*enumerate_cmd) {
            cpmx::Model model = load_model_file(model_path);
            auto configs = cpmx::enumerate_configurations(model, enumeration_bound());
            if (count_only) {
                std::cout << configs.size() << "\n";
            } else {
                json list = json::array();
                for (const auto& config : configs) list.push_back(cpmx::configuration_to_json(config));
                std::cout << json{{"count", configs.size()}, {"configurations", list}}.dump(2) << "\n";
            }
            return exit_ok;
        }

        if (*trace_show) {
            cpmx::EvolutionTrace trace = load_trace_file(trace_path);
            json list = json::array();
            for (const auto& entry : trace.entries) list.push_back(cpmx::trace_entry_to_json(entry));
            std::cout << list.dump(2) << "\n";
            return exit_ok;
        }
        if (*trace_replay) {
            cpmx::Model model = load_model_file(model_path);
            cpmx::EvolutionTrace trace = load_trace_file(trace_path);
            cpmx::Model final_model = cpmx::replay(model, trace);
            write_output(out_path, cpmx::save_model(final_model));
            std::cout << json{{"entries", trace.size()}, {"hash", cpmx::canonical_hash(final_model)}}.dump(2)
                      << "\n";
            return exit_ok;
        }
        if (*trace_undo) {
            cpmx::Model model = load_model_file(model_path);
            cpmx::EvolutionTrace trace = load_trace_file(trace_path);
            auto [restored, shorter] = cpmx::undo(model, trace);
            write_output(out_path.empty() ? model_path : out_path, cpmx::save_model(restored));
            write_output(trace_path, cpmx::trace_to_jsonl(shorter));
            std::cout << json{{"entries", shorter.size()}, {"hash", cpmx::canonical_hash(restored)}}.dump(2)
                      << "\n";
            return exit_ok;
        }

        if (*export_cmd) {
            cpmx::Model model = load_model_file(model_path);
            write_output(out_path.empty() ? "-" : out_path, cpmx::export_dot(model));
            return exit_ok;
        }
    } catch (const Error& error) {
        print_error(error);
        return exit_code_for(error.code());
    } catch (const std::exception& error) {
        json out{{"error", "Internal"}, {"message", error.what()}};
        std::cerr << out.dump() << "\n";
        return exit_io;
    }

    return exit_usage;
}
