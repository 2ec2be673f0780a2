#pragma once

#include "stripsmorph/bitset.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace stripsmorph {

// Fluents and operators are referenced by dense indices into their owning
// instance; names live only in the instance tables.
using FluentId = int;
using OperatorId = int;

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition not satisfied when applying an operator.
struct NotApplicable : ModelError {
    using ModelError::ModelError;
};

// Morphism maps do not have the totality/indexing required by their kind.
struct ShapeMismatch : ModelError {
    using ModelError::ModelError;
};

// A morphism handed to translate_plan failed verification.
struct InvalidMorphism : ModelError {
    using ModelError::ModelError;
};

// Instance invariant violated (duplicate names, bad ids, add/del overlap).
struct ValidationError : ModelError {
    using ModelError::ModelError;
};

// An operator: precondition, positive effect (add) and negative effect (del),
// all as fluent sets over the owning instance. add and del are disjoint.
struct Operator {
    std::string name;
    Bitset pre;
    Bitset add;
    Bitset del;
};

using State = Bitset;
using Plan = std::vector<OperatorId>;

struct StripsInstance {
    std::string name;
    std::vector<std::string> fluent_names;
    State init;
    State goal;
    std::vector<Operator> operators;

    int fluent_count() const { return static_cast<int>(fluent_names.size()); }
    int operator_count() const { return static_cast<int>(operators.size()); }

    // -1 when absent.
    int fluent_id(const std::string& n) const;
    int operator_id(const std::string& n) const;
};

// Throws ValidationError on any broken invariant. The add/del overlap check
// rejects operators whose effects would be ambiguous for profiles and
// morphism conditions.
void validate(const StripsInstance& instance);

// Convenience builder from names; validates.
StripsInstance make_instance(std::string name, std::vector<std::string> fluents,
                             const std::vector<std::string>& init,
                             const std::vector<std::string>& goal,
                             const std::vector<std::tuple<std::string, std::vector<std::string>,
                                                          std::vector<std::string>,
                                                          std::vector<std::string>>>& ops);

enum class MorphKind { SI, SSIH, SSI, SE };

const char* to_string(MorphKind kind);
std::optional<MorphKind> morph_kind_from_string(const std::string& s);

// A (possibly partial) morphism between two instances P and P2.
//
// SI / SSI-H / SSI: fluent_map is indexed by fluents of P and maps into P2,
// op_map likewise; both must be total.
//
// SE (embedding of P2 in P, with P the host): fluent_map is indexed by
// fluents of the embedded instance P2 and maps into P; op_map is indexed by
// operators of the host P and maps into P2, and only needs to be defined on
// active operators (those whose effect meets the image of the fluent map).
struct Morphism {
    MorphKind kind = MorphKind::SSI;
    std::vector<std::optional<FluentId>> fluent_map;
    std::vector<std::optional<OperatorId>> op_map;
};

struct VerifyReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

bool is_applicable(const State& s, const Operator& o);

// (s \ del) U add; throws NotApplicable when pre is not contained in s.
State apply_operator(const State& s, const Operator& o);

// True iff every step of the plan is applicable starting from the initial
// state; with as_solution, additionally requires the goal in the final state.
bool validate_plan(const StripsInstance& instance, const Plan& plan, bool as_solution);

// Checks every condition of the morphism kind and reports each violated one
// by name. Throws ShapeMismatch when the maps do not have the required shape
// (sizes, totality for SI/SSI-H/SSI, id ranges).
VerifyReport verify_morphism(const StripsInstance& p, const StripsInstance& p2,
                             const Morphism& m);

// SI/SSI-H/SSI: the image of the plan under the operator map.
// SE: drops operators of the host plan that are inactive under m and maps the
// rest, yielding a plan of the embedded instance.
// Throws InvalidMorphism when m does not verify.
Plan translate_plan(const StripsInstance& p, const StripsInstance& p2, const Morphism& m,
                    const Plan& plan);

// Image of the fluent map over the embedded instance's fluents (SE helper);
// result is a set over the host instance.
Bitset fluent_image(const Morphism& m, int host_fluent_count);

// Active host operators of an SE morphism: effect intersects the fluent image.
bool se_operator_active(const Operator& host_op, const Bitset& image);

} // namespace stripsmorph
