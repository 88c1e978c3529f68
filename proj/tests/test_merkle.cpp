#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <streamseal/merkle.hpp>

using namespace streamseal;

namespace {

const std::string kR1 =
    R"({"sourceStream":"A","temperature":1.5,"timestamp":"2025-01-01T00:00:00Z"})";
const std::string kR2 =
    R"({"sourceStream":"A","temperature":2.5,"timestamp":"2025-01-01T00:10:00Z"})";
const std::string kR3 =
    R"({"sourceStream":"A","temperature":-3,"timestamp":"2025-01-01T00:20:00Z"})";

// Reference reduction written independently of build_tree: sort, then fold
// levels with explicit odd handling.
Digest brute_root(std::vector<Digest> level) {
  std::sort(level.begin(), level.end());
  while (level.size() > 1) {
    std::vector<Digest> next;
    for (std::size_t i = 0; i < level.size(); i += 2) {
      const Digest& left = level[i];
      const Digest& right = i + 1 < level.size() ? level[i + 1] : level[i];
      next.push_back(combine(left, right));
    }
    level = std::move(next);
  }
  return level.front();
}

}  // namespace

TEST_CASE("leaf digests match the pinned values") {
  CHECK(leaf_hash(kR1).hex() ==
        "660b274ace4cf095c2250437e6b5cbe652c87818cbda03c0496d66fed352a67f");
  CHECK(leaf_hash(kR2).hex() ==
        "875c91374fb328d02fb9cc3f4f1074d57929b089fee86a47966ecd5a98d108b2");
  CHECK(leaf_hash(kR3).hex() ==
        "396b48241e862d6fa512b47289e2181b0266c18a5d04664616620704e7d3d70b");
}

TEST_CASE("roots match the pinned values") {
  auto one = merkle_root({kR1});
  REQUIRE(one.has_value());
  CHECK(one->hex() == leaf_hash(kR1).hex());

  auto two = merkle_root({kR1, kR2});
  REQUIRE(two.has_value());
  CHECK(two->hex() == "7914d74cddab26dedd56916372ad541cc449db873ec8b64c9d8a39e8fbcaea6d");

  auto three = merkle_root({kR1, kR2, kR3});
  REQUIRE(three.has_value());
  CHECK(three->hex() == "a0c6034ef2b4e8f4dfb3c6f5ce26999f4e8d309d8d62ad481fa44a6bed43398a");
}

TEST_CASE("three-leaf root built by hand") {
  // Sorted leaf order is r3 < r1 < r2; the odd tail duplicates itself.
  auto l1 = leaf_hash(kR1);
  auto l2 = leaf_hash(kR2);
  auto l3 = leaf_hash(kR3);
  auto left = combine(l3, l1);
  auto right = combine(l2, l2);
  CHECK(combine(left, right) == *merkle_root({kR1, kR2, kR3}));
}

TEST_CASE("empty batch has no root") {
  CHECK_FALSE(merkle_root({}).has_value());
  CHECK(build_tree({}).empty());
  CHECK_FALSE(build_tree({}).root().has_value());
}

TEST_CASE("root is invariant under input permutation") {
  std::vector<std::string> lines;
  for (int i = 0; i < 9; ++i) {
    lines.push_back("line-" + std::to_string(i));
  }
  auto expected = merkle_root(lines);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(lines.begin(), lines.end(), rng);
    CHECK(merkle_root(lines) == expected);
  }
}

TEST_CASE("build_tree agrees with an independent reduction for sizes 1..32") {
  std::vector<Digest> leaves;
  for (int n = 1; n <= 32; ++n) {
    leaves.push_back(Digest::of("leaf-" + std::to_string(n)));
    auto tree = build_tree(leaves);
    REQUIRE(tree.root().has_value());
    CHECK(*tree.root() == brute_root(leaves));
    CHECK(tree.leaf_count() == static_cast<std::size_t>(n));
    CHECK(std::is_sorted(tree.levels[0].begin(), tree.levels[0].end()));
  }
}

TEST_CASE("duplicate leaves are kept, not collapsed") {
  auto two_same = merkle_root({kR1, kR1});
  REQUIRE(two_same.has_value());
  CHECK(*two_same == combine(leaf_hash(kR1), leaf_hash(kR1)));
  CHECK(*two_same != *merkle_root({kR1}));
}

TEST_CASE("proofs verify for every leaf and fail for outsiders") {
  std::vector<std::string> lines;
  for (int i = 0; i < 11; ++i) {
    lines.push_back("entry " + std::to_string(i));
  }
  auto tree = build_tree(leaf_hashes(lines));
  auto root = *tree.root();
  for (const auto& line : lines) {
    auto proof = merkle_proof(tree, leaf_hash(line));
    REQUIRE(proof.has_value());
    CHECK(fold_proof(leaf_hash(line), *proof) == root);
  }
  CHECK_FALSE(merkle_proof(tree, leaf_hash("absent entry")).has_value());

  // A proof for one leaf must not validate a different leaf.
  auto proof = merkle_proof(tree, leaf_hash(lines[0]));
  CHECK(fold_proof(leaf_hash(lines[1]), *proof) != root);
}

TEST_CASE("single-leaf proof is empty") {
  auto tree = build_tree({leaf_hash(kR1)});
  auto proof = merkle_proof(tree, leaf_hash(kR1));
  REQUIRE(proof.has_value());
  CHECK(proof->empty());
  CHECK(fold_proof(leaf_hash(kR1), *proof) == *tree.root());
}

TEST_CASE("tree depth is logarithmic") {
  std::vector<Digest> leaves;
  for (int i = 0; i < 1000; ++i) {
    leaves.push_back(Digest::of(std::to_string(i)));
  }
  auto tree = build_tree(leaves);
  CHECK(tree.levels.size() == 11);  // ceil(log2(1000)) + 1
  auto proof = merkle_proof(tree, leaves[123]);
  REQUIRE(proof.has_value());
  CHECK(proof->size() == 10);
}

TEST_CASE("parallel build is bit-identical to serial") {
  std::vector<std::string> lines;
  for (int i = 0; i < 600; ++i) {
    lines.push_back("row " + std::to_string(i * 37 % 101) + "/" + std::to_string(i));
  }
  auto serial_leaves = leaf_hashes(lines, ExecMode::Serial);
  auto parallel_leaves = leaf_hashes(lines, ExecMode::Parallel);
  CHECK(serial_leaves == parallel_leaves);

  auto serial_tree = build_tree(serial_leaves, ExecMode::Serial);
  auto parallel_tree = build_tree(serial_leaves, ExecMode::Parallel);
  CHECK(serial_tree.levels == parallel_tree.levels);
  CHECK(merkle_root(lines, ExecMode::Serial) == merkle_root(lines, ExecMode::Parallel));
}
