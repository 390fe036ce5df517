#pragma once

#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cadl/dataset.hpp"

namespace cadl {

// Immutable decision tree value. The distinguished Empty value means
// "no tree found under the bound"; it never appears below a Node.
class Tree {
public:
    enum class Kind { Empty, Leaf, Node };

    Tree() = default; // Empty

    static Tree leaf(int label, Count error) {
        Tree t;
        t.kind_ = Kind::Leaf;
        t.label_ = label;
        t.error_ = error;
        return t;
    }

    // left = negative (f-bar) branch, right = positive branch.
    static Tree node(int feature, Tree left, Tree right) {
        if (left.is_empty() || right.is_empty())
            throw std::domain_error("Tree::node: Empty child");
        Tree t;
        t.kind_ = Kind::Node;
        t.feature_ = feature;
        t.left_ = std::make_shared<Tree>(std::move(left));
        t.right_ = std::make_shared<Tree>(std::move(right));
        return t;
    }

    Kind kind() const { return kind_; }
    bool is_empty() const { return kind_ == Kind::Empty; }
    bool is_leaf() const { return kind_ == Kind::Leaf; }
    bool is_node() const { return kind_ == Kind::Node; }

    int label() const { require(Kind::Leaf); return label_; }
    Count leaf_error() const { require(Kind::Leaf); return error_; }
    int feature() const { require(Kind::Node); return feature_; }
    const Tree& left() const { require(Kind::Node); return *left_; }
    const Tree& right() const { require(Kind::Node); return *right_; }

    friend bool operator==(const Tree& a, const Tree& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
        case Kind::Empty: return true;
        case Kind::Leaf: return a.label_ == b.label_ && a.error_ == b.error_;
        case Kind::Node: return a.feature_ == b.feature_ && *a.left_ == *b.left_ && *a.right_ == *b.right_;
        }
        return false;
    }

private:
    void require(Kind k) const {
        if (kind_ != k) throw std::domain_error("Tree: wrong node kind");
    }

    Kind kind_ = Kind::Empty;
    int label_ = 0;
    Count error_ = 0;
    int feature_ = -1;
    std::shared_ptr<Tree> left_, right_;
};

inline int depth(const Tree& t) {
    if (t.is_empty()) throw std::domain_error("depth: empty tree");
    if (t.is_leaf()) return 0;
    return 1 + std::max(depth(t.left()), depth(t.right()));
}

// Follows the negative branch when the feature bit is 0.
template <typename Row>
int predict(const Tree& t, const Row& example) {
    if (t.is_empty()) throw std::domain_error("predict: empty tree");
    const Tree* cur = &t;
    while (cur->is_node())
        cur = example[cur->feature()] ? &cur->right() : &cur->left();
    return cur->label();
}

inline int predict_example(const Tree& t, const BinaryDataset& ds, std::size_t example) {
    if (t.is_empty()) throw std::domain_error("predict: empty tree");
    const Tree* cur = &t;
    while (cur->is_node())
        cur = ds.example_has_feature(example, cur->feature()) ? &cur->right() : &cur->left();
    return cur->label();
}

// Misclassification count over the examples in s.
inline Count tree_error_on(const Tree& t, const BinaryDataset& ds, const ExampleSet& s) {
    if (t.is_empty()) throw std::domain_error("tree_error: empty tree");
    if (t.is_leaf()) {
        Count covered = static_cast<Count>(s.count());
        Count correct = static_cast<Count>(Bitset::count_and(s, ds.class_members(t.label())));
        return covered - correct;
    }
    const Bitset& pos = ds.feature_positives(t.feature());
    return tree_error_on(t.left(), ds, s.and_not(pos)) + tree_error_on(t.right(), ds, s & pos);
}

inline Count tree_error(const Tree& t, const BinaryDataset& ds) {
    return tree_error_on(t, ds, ds.all_examples());
}

// Text form: {"label":L,"error":E} | {"feat":F,"left":...,"right":...}.
// Key order is fixed for golden tests.
inline void serialize_tree(const Tree& t, std::ostream& out) {
    if (t.is_empty()) { out << "null"; return; }
    if (t.is_leaf()) {
        out << "{\"label\":" << t.label() << ",\"error\":" << t.leaf_error() << "}";
        return;
    }
    out << "{\"feat\":" << t.feature() << ",\"left\":";
    serialize_tree(t.left(), out);
    out << ",\"right\":";
    serialize_tree(t.right(), out);
    out << "}";
}

inline std::string serialize_tree(const Tree& t) {
    std::ostringstream os;
    serialize_tree(t, os);
    return os.str();
}

namespace detail {
inline Tree tree_from_json(const nlohmann::json& j) {
    if (j.is_null()) return Tree{};
    if (j.contains("label"))
        return Tree::leaf(j.at("label").get<int>(), j.at("error").get<Count>());
    return Tree::node(j.at("feat").get<int>(),
                      tree_from_json(j.at("left")),
                      tree_from_json(j.at("right")));
}
} // namespace detail

inline Tree parse_tree(const std::string& text) {
    try {
        return detail::tree_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("parse_tree: ") + e.what());
    }
}

} // namespace cadl
