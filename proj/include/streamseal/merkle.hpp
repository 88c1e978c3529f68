#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <streamseal/digest.hpp>
#include <streamseal/parallel.hpp>

namespace streamseal {

// Which side of the running hash the sibling sits on.
enum class Side { Left, Right };

struct ProofStep {
  Digest sibling;
  Side side = Side::Right;

  bool operator==(const ProofStep&) const = default;
};

using MerkleProof = std::vector<ProofStep>;

// Full tree, kept level by level. levels[0] holds the byte-sorted leaf
// digests; the last level holds the single root. An empty tree has no levels.
struct MerkleTree {
  std::vector<std::vector<Digest>> levels;

  bool empty() const { return levels.empty(); }
  std::size_t leaf_count() const { return levels.empty() ? 0 : levels.front().size(); }
  std::optional<Digest> root() const;
};

// Leaf digest of one canonical line (no domain separation; leaves and
// interior nodes share the hash function, which callers must not expose to
// attacker-chosen 64-byte leaf content).
Digest leaf_hash(std::string_view bytes);

// Hashes a batch of canonical lines, preserving input order.
std::vector<Digest> leaf_hashes(const std::vector<std::string>& lines,
                                ExecMode mode = ExecMode::Serial);

// Parent digest over the 64 concatenated child bytes.
Digest combine(const Digest& left, const Digest& right);

// Sorts the leaf digests by byte order, then reduces pairwise, duplicating
// the trailing digest of an odd level. Deterministic for any input order.
MerkleTree build_tree(std::vector<Digest> leaves, ExecMode mode = ExecMode::Serial);

// Root over canonical lines; nullopt for an empty batch.
std::optional<Digest> merkle_root(const std::vector<std::string>& lines,
                                  ExecMode mode = ExecMode::Serial);

// Inclusion path for the first leaf equal to `leaf`; nullopt if absent.
std::optional<MerkleProof> merkle_proof(const MerkleTree& tree, const Digest& leaf);

// Replays a proof from a leaf digest up to the implied root.
Digest fold_proof(const Digest& leaf, const MerkleProof& proof);

}  // namespace streamseal
