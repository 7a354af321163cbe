#pragma once

#include "bubbletree/rational.hpp"
#include "bubbletree/tree.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubbletree {

// Stratification of the compactified moduli space of charge K, one stratum
// per bubble tree, ordered by contraction. `hasse` holds the covering pairs
// (i, j): strata[j] is a single contraction of strata[i].
struct StratumPoset {
    int K = 0;
    long chi = 0;
    long sigma = 0;
    std::vector<StratumInfo> strata;  // sorted by canonical string
    std::vector<std::pair<int, int>> hasse;
    std::vector<bool> active;
    // Target canonical string -> sources whose exceptional divisors it received.
    std::map<std::string, std::vector<std::string>> exceptional;

    int index_of(const BubbleTree& t) const;  // -1 when absent
    int maximal() const;                       // index of [K]
};

StratumPoset build_poset(int K, long chi, long sigma);
StratumPoset build_poset_serial(int K, long chi, long sigma);

// Support pattern over the edges at a ghost end: index 0 is the parent
// edge, 1..k the child edges in vertex order.
using SupportPattern = std::vector<int>;
std::map<SupportPattern, BubbleTree> exceptional_assignment(const BubbleTree& t, int v);

struct DimensionAudit {
    bool sphere_ok = false;
    bool fiber_ok = false;
    bool neighborhood_ok = false;
    long before = 0;  // screen + gluing - group
    long after = 0;   // screen + radial + exceptional fiber
    std::string failure;
    bool ok() const { return sphere_ok && fiber_ok && neighborhood_ok; }
};

struct EndFlip {
    int vertex = -1;
    int n_children = 0;
    int sphere_dim = 0;  // 4(n+1) - 1
    int fiber_dim = 0;   // sphere_dim - 3
    std::string group = "SU(2)";
    Rational multiplicity;  // 1 / 2^(n+1): one Z_2 per gluing factor
    BubbleTree cut;         // tree cut at this end
    std::map<SupportPattern, BubbleTree> assignment;
    std::string closure_note;
    DimensionAudit audit;
};

struct FlipEvent {
    BubbleTree tree;
    int energy = 0;
    std::vector<EndFlip> ends;
    std::optional<BubbleTree> merged_into;
    bool ok() const;
};

class FlipPreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Neighbourhood dimension bookkeeping for one end with n children.
DimensionAudit audit_end(int n_children, int sphere_dim, int fiber_dim);
DimensionAudit audit_dimensions(const FlipEvent& e);

std::vector<FlipEvent> flip_step(StratumPoset& p, int m);

struct Resolution {
    StratumPoset initial;
    StratumPoset poset;
    std::vector<FlipEvent> log;
    int rounds = 0;
};
// Throws std::runtime_error with diagnostics when an audit fails.
Resolution resolve(int K, long chi, long sigma);

std::string poset_dot(const StratumPoset& p, bool active_only = false);
nlohmann::json poset_to_json(const StratumPoset& p);
nlohmann::json event_to_json(const FlipEvent& e);

}  // namespace bubbletree
