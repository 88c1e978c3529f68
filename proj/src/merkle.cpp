#include <streamseal/merkle.hpp>

#include <algorithm>
#include <cstdint>

#include <streamseal/sha256.hpp>

namespace streamseal {

std::optional<Digest> MerkleTree::root() const {
  if (levels.empty()) {
    return std::nullopt;
  }
  return levels.back().front();
}

Digest leaf_hash(std::string_view bytes) {
  return Digest{sha256(bytes)};
}

std::vector<Digest> leaf_hashes(const std::vector<std::string>& lines, ExecMode mode) {
  std::vector<Digest> out(lines.size());
  if (use_parallel(mode, lines.size())) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(lines.size()); ++i) {
      out[static_cast<std::size_t>(i)] = leaf_hash(lines[static_cast<std::size_t>(i)]);
    }
  } else {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      out[i] = leaf_hash(lines[i]);
    }
  }
  return out;
}

Digest combine(const Digest& left, const Digest& right) {
  Sha256 hasher;
  hasher.update(left.bytes.data(), left.bytes.size());
  hasher.update(right.bytes.data(), right.bytes.size());
  return Digest{hasher.finish()};
}

namespace {

std::vector<Digest> next_level(const std::vector<Digest>& level, ExecMode mode) {
  std::size_t pairs = (level.size() + 1) / 2;
  std::vector<Digest> parents(pairs);
  auto parent_at = [&](std::size_t p) {
    std::size_t li = 2 * p;
    std::size_t ri = li + 1 < level.size() ? li + 1 : li;
    return combine(level[li], level[ri]);
  };
  if (use_parallel(mode, pairs)) {
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(pairs); ++p) {
      parents[static_cast<std::size_t>(p)] = parent_at(static_cast<std::size_t>(p));
    }
  } else {
    for (std::size_t p = 0; p < pairs; ++p) {
      parents[p] = parent_at(p);
    }
  }
  return parents;
}

}  // namespace

MerkleTree build_tree(std::vector<Digest> leaves, ExecMode mode) {
  MerkleTree tree;
  if (leaves.empty()) {
    return tree;
  }
  std::sort(leaves.begin(), leaves.end());
  tree.levels.push_back(std::move(leaves));
  while (tree.levels.back().size() > 1) {
    tree.levels.push_back(next_level(tree.levels.back(), mode));
  }
  return tree;
}

std::optional<Digest> merkle_root(const std::vector<std::string>& lines, ExecMode mode) {
  return build_tree(leaf_hashes(lines, mode), mode).root();
}

std::optional<MerkleProof> merkle_proof(const MerkleTree& tree, const Digest& leaf) {
  if (tree.empty()) {
    return std::nullopt;
  }
  const auto& leaves = tree.levels.front();
  auto it = std::find(leaves.begin(), leaves.end(), leaf);
  if (it == leaves.end()) {
    return std::nullopt;
  }
  MerkleProof proof;
  std::size_t index = static_cast<std::size_t>(it - leaves.begin());
  for (std::size_t depth = 0; depth + 1 < tree.levels.size(); ++depth) {
    const auto& level = tree.levels[depth];
    std::size_t sibling = index ^ 1;
    if (sibling >= level.size()) {
      sibling = index;  // odd tail pairs with itself
    }
    proof.push_back(ProofStep{level[sibling],
                              sibling >= index ? Side::Right : Side::Left});
    index /= 2;
  }
  return proof;
}

Digest fold_proof(const Digest& leaf, const MerkleProof& proof) {
  Digest current = leaf;
  for (const auto& step : proof) {
    current = step.side == Side::Right ? combine(current, step.sibling)
                                       : combine(step.sibling, current);
  }
  return current;
}

}  // namespace streamseal
