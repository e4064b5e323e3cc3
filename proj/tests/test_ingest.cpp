#include "doctest.h"

#include "support/builders.hpp"
#include "synth/ingest/ingest.hpp"

using namespace synth;
using namespace synth::ingest;

namespace {

const char* kSurveyCsv =
    "respondent_id,cycle,variable,value\n"
    "R001,2017-2018,demographics.age,46\n"
    "R001,2017-2018,demographics.sex,female\n"
    "R001,2017-2018,body.bmi,36.2\n"
    "R001,2019-2020,body.bmi,37.8\n"
    "R001,2019-2020,mental_health.depression,1\n"
    "R001,2019-2020,mental_health.anxiety,\n"
    "R002,2017-2018,demographics.age,33\n"
    "R002,2017-2018,demographics.sex,male\n";

}  // namespace

TEST_CASE("survey rows merge across cycles, later cycle wins") {
    auto records = parse_surveys(kSurveyCsv);
    REQUIRE(records.size() == 2);

    const SurveyRecord& r1 = records[0];
    CHECK(r1.respondent_id == "R001");
    CHECK(r1.cycle == "2019-2020");
    CHECK(std::get<double>(r1.variables.at("demographics.age")) == 46.0);
    // 2019-2020 value overwrites the 2017-2018 one.
    CHECK(std::get<double>(r1.variables.at("body.bmi")) == 37.8);
    CHECK(std::get<double>(r1.variables.at("mental_health.depression")) == 1.0);
    // Empty cell is an explicit null, not an absent key.
    REQUIRE(r1.variables.count("mental_health.anxiety") == 1);
    CHECK(is_null(r1.variables.at("mental_health.anxiety")));

    CHECK(records[1].respondent_id == "R002");
    CHECK(std::get<std::string>(records[1].variables.at("demographics.sex")) == "male");
}

TEST_CASE("merge result does not depend on row order") {
    // Same rows, later cycle listed first.
    auto reordered = parse_surveys(
        "respondent_id,cycle,variable,value\n"
        "R001,2019-2020,body.bmi,37.8\n"
        "R001,2017-2018,body.bmi,36.2\n"
        "R001,2017-2018,demographics.age,46\n");
    REQUIRE(reordered.size() == 1);
    CHECK(std::get<double>(reordered[0].variables.at("body.bmi")) == 37.8);
    CHECK(reordered[0].cycle == "2019-2020");
}

TEST_CASE("conflicting duplicate in one cycle is an error, repeat is not") {
    CHECK_THROWS_WITH_AS(
        parse_surveys("respondent_id,cycle,variable,value\n"
                      "R001,2017-2018,demographics.age,46\n"
                      "R001,2017-2018,demographics.age,47\n"),
        doctest::Contains("conflicting values"), ValidationError);

    // An exact duplicate row is tolerated.
    auto records = parse_surveys(
        "respondent_id,cycle,variable,value\n"
        "R001,2017-2018,demographics.age,46\n"
        "R001,2017-2018,demographics.age,46\n");
    CHECK(records.size() == 1);
}

TEST_CASE("survey header and mandatory fields are enforced") {
    CHECK_THROWS_AS(parse_surveys("respondent_id,cycle,value\nR1,c,1\n"), FormatError);
    CHECK_THROWS_AS(parse_surveys("respondent_id,cycle,variable,value\n,c,v,1\n"), FormatError);
    CHECK_THROWS_AS(
        parse_surveys("respondent_id,cycle,variable,value\nR1,2017-2018,body.bmi,31\n"),
        ValidationError);  // no demographics.* variable at all
}

namespace {

const char* kClaimsJsonl = R"({"patient_id": "P02", "date": "2020-03-01", "kind": "diagnosis", "code": "E66.9", "description": "Obesity, unspecified"}
{"patient_id": "P01", "date": "2019-05-20", "kind": "diagnosis", "code": "E66.01", "description": "Morbid obesity"}
{"patient_id": "P01", "date": "2019-05-20", "kind": "medication", "code": "RX100", "description": "metformin"}
{"patient_id": "P01", "date": "2019-05-20", "kind": "procedure", "code": "99213", "description": "office visit"}
{"patient_id": "P01", "date": "2018-11-02", "kind": "diagnosis", "code": "F41.1", "description": "Generalized anxiety disorder"}
)";

}  // namespace

TEST_CASE("claims group by patient and sort by date with kind tie-break") {
    auto trajectories = parse_claims(kClaimsJsonl);
    REQUIRE(trajectories.size() == 2);
    CHECK(trajectories[0].patient_id == "P01");
    CHECK(trajectories[1].patient_id == "P02");

    const auto& events = trajectories[0].events;
    REQUIRE(events.size() == 4);
    CHECK(events[0].code == "F41.1");  // earliest date first
    // Same-day events: diagnosis before procedure before medication.
    CHECK(events[1].kind == ClaimKind::Diagnosis);
    CHECK(events[2].kind == ClaimKind::Procedure);
    CHECK(events[3].kind == ClaimKind::Medication);
}

TEST_CASE("claims errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_claims("{\"patient_id\": \"P1\"\n"), doctest::Contains("line 1"),
                         ParseError);

    const std::string bad_kind =
        R"({"patient_id": "P1", "date": "2020-01-01", "kind": "diagnosis", "code": "E66.9", "description": "Obesity"})"
        "\n"
        R"({"patient_id": "P1", "date": "2020-01-02", "kind": "imaging", "code": "X", "description": "MRI"})"
        "\n";
    CHECK_THROWS_WITH_AS(parse_claims(bad_kind), doctest::Contains("line 2"), FormatError);

    const std::string missing_key =
        R"({"patient_id": "P1", "date": "2020-01-01", "kind": "diagnosis", "code": "E66.9"})" "\n";
    CHECK_THROWS_WITH_AS(parse_claims(missing_key), doctest::Contains("description"), FormatError);
}

TEST_CASE("every trajectory must include an obesity diagnosis") {
    const std::string no_obesity =
        R"({"patient_id": "P9", "date": "2020-01-01", "kind": "diagnosis", "code": "F32.1", "description": "Major depressive disorder"})"
        "\n";
    CHECK_THROWS_WITH_AS(parse_claims(no_obesity), doctest::Contains("P9"), ValidationError);

    // An E66 code counts even if the description does not say "obesity".
    const std::string coded =
        R"({"patient_id": "P9", "date": "2020-01-01", "kind": "diagnosis", "code": "E66.01", "description": "Severe condition due to excess calories"})"
        "\n";
    CHECK(parse_claims(coded).size() == 1);
}

TEST_CASE("priors parse preserves declared category order") {
    const std::string text = R"({
      "demographics": {
        "age": {"45-59": 0.5, "18-29": 0.5},
        "sex": {"male": 0.48, "female": 0.52},
        "race": {"white": 1.0},
        "education": {"high school": 1.0},
        "occupation": {"clerk": 1.0},
        "income": {"<$30k": 1.0},
        "marital_status": {"single": 1.0},
        "location": {"Ohio": 1.0},
        "insurance": {"medicaid": 1.0}
      },
      "comorbidity": {"ObesityDepression": 0.75, "ObesityOnly": 0.25},
      "bmi_class": {"default": {"I": 0.6, "II": 0.3, "III": 0.1}}
    })";
    PriorTable table = parse_priors(text);
    // Declaration order survives even though it is not sorted.
    REQUIRE(table.demographic_priors.at("age").entries.size() == 2);
    CHECK(table.demographic_priors.at("age").entries[0].first == "45-59");
    CHECK(table.comorbidity_priors.entries[0].first == "ObesityDepression");

    // Round-trip: serialize + parse preserves everything, including order.
    CHECK(parse_priors(serialize_priors(table)) == table);
}

TEST_CASE("priors validation names the offending distribution") {
    ingest::PriorTable good = testing::make_priors();
    std::string base = serialize_priors(good);

    CHECK_THROWS_WITH_AS(parse_priors(R"({
      "demographics": {"sex": {"male": 0.6, "female": 0.5}},
      "comorbidity": {"ObesityOnly": 1.0},
      "bmi_class": {"default": {"I": 1.0}}
    })"),
                         doctest::Contains("demographics.sex"), ValidationError);

    CHECK_THROWS_WITH_AS(parse_priors(R"({
      "demographics": {"sex": {"male": 1.2, "female": -0.2}},
      "comorbidity": {"ObesityOnly": 1.0},
      "bmi_class": {"default": {"I": 1.0}}
    })"),
                         doctest::Contains("-0.2"), ValidationError);

    // Unknown comorbidity group or BMI class name in the priors is an error.
    CHECK_THROWS_AS(parse_priors(R"({
      "demographics": {"sex": {"male": 1.0}},
      "comorbidity": {"ObesityInsomnia": 1.0},
      "bmi_class": {"default": {"I": 1.0}}
    })"),
                    FormatError);
    CHECK_THROWS_AS(parse_priors(R"({
      "demographics": {"sex": {"male": 1.0}},
      "comorbidity": {"ObesityOnly": 1.0},
      "bmi_class": {"default": {"IV": 1.0}}
    })"),
                    FormatError);

    CHECK_THROWS_AS(parse_priors("{\"demographics\": {}}"), FormatError);
    CHECK_THROWS_AS(parse_priors("not json"), ParseError);
}

TEST_CASE("bmi prior falls back to default per group") {
    PriorTable table = testing::make_priors();
    CHECK(table.bmi_prior_for(ComorbidityGroup::ObesityBingeEating).entries[0].second == 0.40);
    CHECK(table.bmi_prior_for(ComorbidityGroup::ObesityAnxiety).entries[0].second == 0.55);

    PriorTable no_default;
    no_default.bmi_class_priors["ObesityOnly"] = {{{"I", 1.0}}};
    CHECK_THROWS_AS(no_default.bmi_prior_for(ComorbidityGroup::ObesityDepression), ConfigError);
}

TEST_CASE("sum-to-one tolerance admits rounding noise") {
    // 1/3 three ways does not sum to exactly 1 in decimal, but is within 1e-9.
    Categorical thirds{{{"a", 0.333333333}, {"b", 0.333333333}, {"c", 0.333333334}}};
    CHECK_NOTHROW(thirds.validate("thirds"));

    Categorical off{{{"a", 0.3333}, {"b", 0.3333}, {"c", 0.3333}}};
    CHECK_THROWS_AS(off.validate("off"), ValidationError);
}
