#include "synth/ingest/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "synth/util/csv.hpp"
#include "synth/util/strings.hpp"

namespace synth::ingest {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Numeric cells become doubles, everything else stays a string, and an empty
// cell is an explicit null rather than a dropped key.
VariableValue parse_cell(const std::string& raw) {
    std::string text = util::trim(raw);
    if (text.empty()) return std::monostate{};
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() + text.size()) return value;
    return text;
}

}  // namespace

bool is_null(const VariableValue& v) {
    return std::holds_alternative<std::monostate>(v);
}

std::string variable_to_string(const VariableValue& v) {
    if (std::holds_alternative<std::monostate>(v)) return "";
    if (const double* num = std::get_if<double>(&v)) return util::format_double(*num, 6);
    return std::get<std::string>(v);
}

const char* to_string(ClaimKind kind) {
    switch (kind) {
        case ClaimKind::Diagnosis: return "diagnosis";
        case ClaimKind::Procedure: return "procedure";
        case ClaimKind::Medication: return "medication";
    }
    throw FormatError("unknown claim kind");
}

ClaimKind claim_kind_from_string(std::string_view name) {
    if (name == "diagnosis") return ClaimKind::Diagnosis;
    if (name == "procedure") return ClaimKind::Procedure;
    if (name == "medication") return ClaimKind::Medication;
    throw FormatError("unknown claim kind '" + std::string(name) + "'");
}

void Categorical::validate(const std::string& name) const {
    if (entries.empty()) throw ValidationError("distribution '" + name + "' has no categories");
    double total = 0.0;
    for (const auto& [category, p] : entries) {
        if (category.empty()) throw ValidationError("distribution '" + name + "' has an empty category name");
        if (!(p >= 0.0)) {
            throw ValidationError("distribution '" + name + "' assigns " + util::format_double(p, 6) +
                                  " to '" + category + "'");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ValidationError("distribution '" + name + "' sums to " + util::format_double(total, 12) +
                              ", expected 1");
    }
}

const Categorical& PriorTable::bmi_prior_for(ComorbidityGroup group) const {
    if (auto it = bmi_class_priors.find(to_string(group)); it != bmi_class_priors.end()) return it->second;
    if (auto it = bmi_class_priors.find("default"); it != bmi_class_priors.end()) return it->second;
    throw ConfigError(std::string("no bmi_class prior for group '") + to_string(group) +
                      "' and no default provided");
}

std::vector<SurveyRecord> parse_surveys(const std::string& csv_text) {
    util::CsvTable table = util::read_csv(csv_text);
    const int id_col = table.column("respondent_id");
    const int cycle_col = table.column("cycle");
    const int var_col = table.column("variable");
    const int val_col = table.column("value");
    if (id_col < 0 || cycle_col < 0 || var_col < 0 || val_col < 0) {
        throw FormatError("survey export must have respondent_id, cycle, variable and value columns");
    }

    struct Cell {
        std::string cycle;
        std::string variable;
        VariableValue value;
        size_t row;  // 1-based data row, for error messages
    };
    std::map<std::string, std::vector<Cell>> by_respondent;

    for (size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (row.size() != table.header.size()) {
            throw FormatError("survey row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                              " fields, header has " + std::to_string(table.header.size()));
        }
        std::string id = util::trim(row[id_col]);
        std::string cycle = util::trim(row[cycle_col]);
        std::string variable = util::trim(row[var_col]);
        if (id.empty()) throw FormatError("survey row " + std::to_string(i + 1) + " has an empty respondent_id");
        if (cycle.empty()) throw FormatError("survey row " + std::to_string(i + 1) + " has an empty cycle");
        if (variable.empty()) throw FormatError("survey row " + std::to_string(i + 1) + " has an empty variable");
        by_respondent[id].push_back({cycle, variable, parse_cell(row[val_col]), i + 1});
    }

    std::vector<SurveyRecord> records;
    records.reserve(by_respondent.size());
    for (auto& [id, cells] : by_respondent) {
        // Within one cycle the same variable must not carry two different
        // values; across cycles the later cycle wins.
        std::stable_sort(cells.begin(), cells.end(),
                         [](const Cell& a, const Cell& b) { return a.cycle < b.cycle; });
        SurveyRecord record;
        record.respondent_id = id;
        std::map<std::pair<std::string, std::string>, std::pair<VariableValue, size_t>> seen;
        for (const Cell& cell : cells) {
            auto key = std::make_pair(cell.cycle, cell.variable);
            auto [it, inserted] = seen.emplace(key, std::make_pair(cell.value, cell.row));
            if (!inserted && it->second.first != cell.value) {
                throw ValidationError("respondent '" + id + "' has conflicting values for '" + cell.variable +
                                      "' in cycle " + cell.cycle + " (rows " + std::to_string(it->second.second) +
                                      " and " + std::to_string(cell.row) + ")");
            }
            record.variables[cell.variable] = cell.value;
            record.cycle = cell.cycle;
        }
        bool has_demographics = false;
        for (const auto& [name, value] : record.variables) {
            if (util::starts_with(name, "demographics.")) {
                has_demographics = true;
                break;
            }
        }
        if (!has_demographics) {
            throw ValidationError("respondent '" + id + "' has no demographics.* variables");
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<SurveyRecord> load_surveys(const std::string& path) {
    return parse_surveys(read_file(path));
}

std::vector<ClaimsTrajectory> parse_claims(const std::string& jsonl_text) {
    std::map<std::string, std::vector<ClaimEvent>> by_patient;
    std::istringstream in(jsonl_text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (util::trim(line).empty()) continue;
        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("claims line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
        try {
            if (!row.is_object()) throw FormatError("expected a JSON object");
            for (const char* key : {"patient_id", "date", "kind", "code", "description"}) {
                if (!row.contains(key)) throw FormatError(std::string("missing key '") + key + "'");
            }
            ClaimEvent event;
            event.date = Date::parse(row.at("date").get<std::string>());
            event.kind = claim_kind_from_string(row.at("kind").get<std::string>());
            event.code = row.at("code").get<std::string>();
            event.description = row.at("description").get<std::string>();
            std::string patient = row.at("patient_id").get<std::string>();
            if (patient.empty()) throw FormatError("empty patient_id");
            by_patient[patient].push_back(std::move(event));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("claims line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw FormatError("claims line " + std::to_string(line_no) + ": " + e.what());
        }
    }

    std::vector<ClaimsTrajectory> trajectories;
    trajectories.reserve(by_patient.size());
    for (auto& [patient, events] : by_patient) {
        std::sort(events.begin(), events.end(), [](const ClaimEvent& a, const ClaimEvent& b) {
            return std::tie(a.date, a.kind, a.code) < std::tie(b.date, b.kind, b.code);
        });
        bool has_obesity_diagnosis = false;
        for (const ClaimEvent& event : events) {
            if (event.kind != ClaimKind::Diagnosis) continue;
            if (util::contains_ci(event.description, "obesity") || util::starts_with(event.code, "E66")) {
                has_obesity_diagnosis = true;
                break;
            }
        }
        if (!has_obesity_diagnosis) {
            throw ValidationError("patient '" + patient + "' has no obesity diagnosis event");
        }
        trajectories.push_back({patient, std::move(events)});
    }
    return trajectories;
}

std::vector<ClaimsTrajectory> load_claims(const std::string& path) {
    return parse_claims(read_file(path));
}

void to_json(Json& j, const SurveyRecord& record) {
    Json variables = Json::object();
    for (const auto& [name, value] : record.variables) {
        if (is_null(value)) {
            variables[name] = nullptr;
        } else if (const double* num = std::get_if<double>(&value)) {
            variables[name] = *num;
        } else {
            variables[name] = std::get<std::string>(value);
        }
    }
    j = Json{{"respondent_id", record.respondent_id},
             {"cycle", record.cycle},
             {"variables", std::move(variables)}};
}

void from_json(const Json& j, SurveyRecord& record) {
    expect_keys(j, {"respondent_id", "cycle", "variables"}, {}, "survey record");
    record.respondent_id = j.at("respondent_id").get<std::string>();
    record.cycle = j.at("cycle").get<std::string>();
    record.variables.clear();
    const Json& variables = j.at("variables");
    if (!variables.is_object()) throw FormatError("survey record: 'variables' must be an object");
    for (const auto& [name, value] : variables.items()) {
        if (value.is_null()) {
            record.variables[name] = std::monostate{};
        } else if (value.is_number()) {
            record.variables[name] = value.get<double>();
        } else if (value.is_string()) {
            record.variables[name] = value.get<std::string>();
        } else {
            throw FormatError("survey record: variable '" + name +
                              "' must be null, a number, or a string");
        }
    }
}

void to_json(Json& j, const ClaimEvent& event) {
    j = Json{{"date", event.date.to_string()},
             {"kind", to_string(event.kind)},
             {"code", event.code},
             {"description", event.description}};
}

void from_json(const Json& j, ClaimEvent& event) {
    expect_keys(j, {"date", "kind", "code", "description"}, {}, "claim event");
    event.date = Date::parse(j.at("date").get<std::string>());
    event.kind = claim_kind_from_string(j.at("kind").get<std::string>());
    event.code = j.at("code").get<std::string>();
    event.description = j.at("description").get<std::string>();
}

void to_json(Json& j, const ClaimsTrajectory& trajectory) {
    j = Json{{"patient_id", trajectory.patient_id}, {"events", trajectory.events}};
}

void from_json(const Json& j, ClaimsTrajectory& trajectory) {
    expect_keys(j, {"patient_id", "events"}, {}, "claims trajectory");
    trajectory.patient_id = j.at("patient_id").get<std::string>();
    trajectory.events = j.at("events").get<std::vector<ClaimEvent>>();
}

namespace {

Categorical categorical_from_json(const nlohmann::ordered_json& j, const std::string& name) {
    if (!j.is_object()) throw FormatError("distribution '" + name + "' must be a JSON object");
    Categorical dist;
    for (const auto& [category, p] : j.items()) {
        if (!p.is_number()) {
            throw FormatError("distribution '" + name + "' has a non-numeric probability for '" + category + "'");
        }
        dist.entries.emplace_back(category, p.get<double>());
    }
    dist.validate(name);
    return dist;
}

nlohmann::ordered_json categorical_to_json(const Categorical& dist) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [category, p] : dist.entries) j[category] = p;
    return j;
}

}  // namespace

PriorTable parse_priors(const std::string& json_text) {
    nlohmann::ordered_json root;
    try {
        root = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("priors: ") + e.what(), e.byte);
    }
    if (!root.is_object()) throw FormatError("priors file must be a JSON object");
    for (const char* key : {"demographics", "comorbidity", "bmi_class"}) {
        if (!root.contains(key)) throw FormatError(std::string("priors file missing '") + key + "'");
    }

    PriorTable table;
    for (const auto& [attribute, dist] : root.at("demographics").items()) {
        table.demographic_priors[attribute] = categorical_from_json(dist, "demographics." + attribute);
    }
    table.comorbidity_priors = categorical_from_json(root.at("comorbidity"), "comorbidity");
    for (const auto& [category, weight] : table.comorbidity_priors.entries) {
        comorbidity_from_string(category);  // throws FormatError on unknown names
        (void)weight;
    }
    for (const auto& [group, dist] : root.at("bmi_class").items()) {
        if (group != "default") comorbidity_from_string(group);
        Categorical parsed = categorical_from_json(dist, "bmi_class." + group);
        for (const auto& [category, p] : parsed.entries) {
            bmi_category_from_string(category);
            (void)p;
        }
        table.bmi_class_priors[group] = std::move(parsed);
    }
    if (table.bmi_class_priors.empty()) throw FormatError("priors file has no bmi_class distributions");
    return table;
}

PriorTable load_priors(const std::string& path) {
    return parse_priors(read_file(path));
}

std::string serialize_priors(const PriorTable& table) {
    nlohmann::ordered_json root = nlohmann::ordered_json::object();
    root["demographics"] = nlohmann::ordered_json::object();
    for (const auto& [attribute, dist] : table.demographic_priors) {
        root["demographics"][attribute] = categorical_to_json(dist);
    }
    root["comorbidity"] = categorical_to_json(table.comorbidity_priors);
    root["bmi_class"] = nlohmann::ordered_json::object();
    for (const auto& [group, dist] : table.bmi_class_priors) {
        root["bmi_class"][group] = categorical_to_json(dist);
    }
    return root.dump(2) + "\n";
}

}  // namespace synth::ingest
