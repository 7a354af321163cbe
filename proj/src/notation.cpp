#include "bubbletree/notation.hpp"

#include <cctype>
#include <sstream>

namespace bubbletree {

namespace {

constexpr std::string_view kStar = "\xE2\x98\x85";      // ★
constexpr std::string_view kMiddleDot = "\xC2\xB7";     // ·
constexpr std::string_view kCombiningBar = "\xCC\x84";  // U+0304
constexpr std::string_view kMinus = "\xE2\x88\x92";     // U+2212

class Scanner {
public:
    explicit Scanner(std::string_view s) : s_(s) {}

    void skip() {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            else if (starts(kMiddleDot)) pos_ += kMiddleDot.size();
            else break;
        }
    }
    bool starts(std::string_view tok) const { return s_.substr(pos_, tok.size()) == tok; }
    bool eat(std::string_view tok) {
        skip();
        if (!starts(tok)) return false;
        pos_ += tok.size();
        return true;
    }
    void expect(std::string_view tok) {
        if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool at_end() {
        skip();
        return pos_ >= s_.size();
    }
    std::size_t pos() const { return pos_; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

    long integer() {
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("expected integer");
        if (pos_ - b > 9) fail("integer too large");
        return std::stol(std::string(s_.substr(b, pos_ - b)));
    }

    Rational rational() {
        skip();
        bool neg = false;
        if (eat("-") || eat(kMinus)) neg = true;
        long n = integer();
        Rational r(n);
        skip();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            long d = integer();
            if (d == 0) fail("zero denominator");
            r = Rational(n, d);
        }
        return neg ? -r : r;
    }

    std::string identifier() {
        skip();
        std::string out;
        if (eat("-") || eat(kMinus)) out = "-";
        skip();
        std::size_t b = pos_;
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
        }
        if (b == pos_) fail("expected point label");
        return out + std::string(s_.substr(b, pos_ - b));
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

struct RootWeight {
    int weight;
    bool barred;
};

RootWeight root_weight(Scanner& sc) {
    sc.skip();
    if (sc.eat("Kbar")) return {0, true};
    long w = sc.integer();
    if (w == 0 && (sc.starts("~") || sc.starts(kCombiningBar))) {
        sc.eat("~") || sc.eat(kCombiningBar);
        return {0, true};
    }
    return {static_cast<int>(w), false};
}

void parse_list(Scanner& sc, TreeNode& owner);

void parse_subtree(Scanner& sc, TreeNode& owner) {
    TreeNode n;
    sc.skip();
    if (sc.starts("Kbar")) sc.fail("barred weight allowed only at the root");
    n.weight = static_cast<int>(sc.integer());
    if (sc.starts("~") || sc.starts(kCombiningBar)) sc.fail("barred weight allowed only at the root");
    if (sc.peek() == '[') parse_list(sc, n);
    owner.children.push_back(std::move(n));
}

void parse_item(Scanner& sc, TreeNode& owner) {
    if (sc.eat(kStar) || sc.eat("*")) {
        long m = sc.integer();
        if (m <= 0) sc.fail("marked weight must be positive");
        owner.marks.push_back(static_cast<int>(m));
        return;
    }
    if (sc.eat("[")) {
        parse_subtree(sc, owner);
        sc.expect("]");
        return;
    }
    parse_subtree(sc, owner);
}

void parse_list(Scanner& sc, TreeNode& owner) {
    sc.expect("[");
    parse_item(sc, owner);
    while (sc.eat(",")) parse_item(sc, owner);
    sc.expect("]");
}

void parse_config_list(Scanner& sc, std::vector<ConfigPoint>& out) {
    sc.expect("[");
    bool any = false;
    while (true) {
        if (sc.peek() == '[') {
            if (!any || !out.back().children.empty()) sc.fail("sub-bracket without a preceding point label");
            parse_config_list(sc, out.back().children);
        } else {
            ConfigPoint p;
            p.label = sc.identifier();
            if (sc.eat("=")) {
                sc.expect("(");
                std::array<Rational, 4> xs;
                for (int i = 0; i < 4; ++i) {
                    if (i > 0) sc.expect(",");
                    xs[i] = sc.rational();
                }
                sc.expect(")");
                p.coords = xs;
            }
            if (sc.peek() == '[') parse_config_list(sc, p.children);
            out.push_back(std::move(p));
            any = true;
        }
        if (sc.eat(",")) continue;
        if (sc.peek() == '[' && any && out.back().children.empty()) continue;
        break;
    }
    sc.expect("]");
}

void print_point(std::ostringstream& os, const ConfigPoint& p) {
    os << p.label;
    if (p.coords) {
        os << "=(";
        for (int i = 0; i < 4; ++i) os << (i ? "," : "") << (*p.coords)[i];
        os << ')';
    }
    if (!p.children.empty()) {
        os << '[';
        for (std::size_t i = 0; i < p.children.size(); ++i) {
            if (i) os << ',';
            print_point(os, p.children[i]);
        }
        os << ']';
    }
}

TreeNode config_node(const ConfigPoint& p, const std::map<std::string, int>& weights) {
    TreeNode n;
    if (p.children.empty()) {
        auto it = weights.find(p.label);
        n.weight = it == weights.end() ? 1 : it->second;
        return n;
    }
    for (const auto& c : p.children) n.children.push_back(config_node(c, weights));
    return n;
}

}  // namespace

BubbleTree parse_tree_unchecked(std::string_view text) {
    Scanner sc(text);
    sc.expect("[");
    RootWeight rw = root_weight(sc);
    TreeNode root;
    root.weight = rw.weight;
    if (sc.peek() == '[') parse_list(sc, root);
    sc.expect("]");
    if (!sc.at_end()) sc.fail("trailing input");
    return BubbleTree(root, rw.barred);
}

BubbleTree parse_tree(std::string_view text) {
    BubbleTree t = parse_tree_unchecked(text);
    if (auto v = validate_tree(t); !v.empty())
        throw TreeValidationError(v, "invalid bubble tree " + t.canonical() + ": " + v.front().message);
    return t;
}

std::string print_tree(const BubbleTree& t) {
    std::string s = t.canonical();
    if (t.root_barred()) s.insert(2, "~");
    return s;
}

ConfigExpr parse_config(std::string_view text) {
    Scanner sc(text);
    ConfigExpr c;
    parse_config_list(sc, c.points);
    if (!sc.at_end()) sc.fail("trailing input");
    return c;
}

std::string print_config(const ConfigExpr& c) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (i) os << ',';
        print_point(os, c.points[i]);
    }
    os << ']';
    return os.str();
}

BubbleTree config_to_tree(const ConfigExpr& c, const std::map<std::string, int>& leaf_weights) {
    TreeNode root;
    for (const auto& p : c.points) root.children.push_back(config_node(p, leaf_weights));
    return BubbleTree(root);
}

}  // namespace bubbletree
