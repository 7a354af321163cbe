#pragma once

#include "bubbletree/rational.hpp"
#include "bubbletree/tree.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bubbletree {

class ParseError : public std::invalid_argument {
public:
    ParseError(std::size_t position, const std::string& msg)
        : std::invalid_argument("parse error at " + std::to_string(position) + ": " + msg), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class TreeValidationError : public std::invalid_argument {
public:
    TreeValidationError(std::vector<Violation> v, const std::string& msg)
        : std::invalid_argument(msg), violations_(std::move(v)) {}
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

// Bracket notation R(T):
//   tree     := '[' root-weight list? ']'
//   list     := '[' item (',' item)* ']'
//   item     := mark | weight list? | '[' weight list? ']'
//   mark     := ('★' | '*') positive-int
// Root weight may be written "0~", "0̄" or "Kbar" (barred zero). Whitespace
// and the middle dot are ignored. parse_tree validates the result.
BubbleTree parse_tree(std::string_view text);
BubbleTree parse_tree_unchecked(std::string_view text);

// Canonical bracket string; a barred root prints as "0~".
std::string print_tree(const BubbleTree& t);

struct ConfigPoint {
    std::string label;
    std::optional<std::array<Rational, 4>> coords;
    std::vector<ConfigPoint> children;
    friend bool operator==(const ConfigPoint&, const ConfigPoint&) = default;
};

struct ConfigExpr {
    std::vector<ConfigPoint> points;
    friend bool operator==(const ConfigExpr&, const ConfigExpr&) = default;
};

// Y(d_T) configuration brackets, e.g. "[x1[y1,y2[z1,z2]]]" or
// "[p=(0,0,0,0)]". A bare bracket right after a label is read as that
// label's sub-bracket ("x, [y,-y]" == "x[y,-y]").
ConfigExpr parse_config(std::string_view text);
std::string print_config(const ConfigExpr& c);

// Nesting tree of a configuration: weight-0 root, a ghost for every
// labelled point with a sub-bracket, a leaf for every bare point.
BubbleTree config_to_tree(const ConfigExpr& c, const std::map<std::string, int>& leaf_weights = {});

}  // namespace bubbletree
