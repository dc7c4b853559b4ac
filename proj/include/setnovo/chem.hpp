#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace setnovo::chem {

// Monoisotopic element masses (Da).
inline constexpr double kMassH = 1.0078250319;
inline constexpr double kMassC = 12.0;
inline constexpr double kMassN = 14.0030740052;
inline constexpr double kMassO = 15.9949146221;
inline constexpr double kMassS = 31.97207069;

inline constexpr double kMassProton = 1.00728;
inline constexpr double kMassH2O = 18.01056;
inline constexpr double kMassNH3 = 17.02655;

constexpr double composition_mass(int c, int h, int n, int o, int s = 0) {
  return c * kMassC + h * kMassH + n * kMassN + o * kMassO + s * kMassS;
}

// Modification deltas.
inline constexpr double kDeltaOxidation = kMassO;
inline constexpr double kDeltaDeamidation = kMassO - kMassN - kMassH;
inline constexpr double kDeltaCarbamidomethyl = composition_mass(2, 3, 1, 1);

using TokenId = std::uint8_t;

inline constexpr int kVocabSize = 26;
inline constexpr int kNumIonTypes = 8;

enum class TokenKind : std::uint8_t { Pad, Start, End, Residue, ModifiedResidue };

// Fixed token ids. 3 special tokens, 20 standard residues (C carries the
// fixed carbamidomethyl group), 3 variable modifications.
namespace tok {
inline constexpr TokenId Pad = 0;
inline constexpr TokenId Start = 1;
inline constexpr TokenId End = 2;
inline constexpr TokenId A = 3;
inline constexpr TokenId R = 4;
inline constexpr TokenId N = 5;
inline constexpr TokenId Ndeam = 6;
inline constexpr TokenId D = 7;
inline constexpr TokenId Ccam = 8;
inline constexpr TokenId E = 9;
inline constexpr TokenId Q = 10;
inline constexpr TokenId Qdeam = 11;
inline constexpr TokenId G = 12;
inline constexpr TokenId H = 13;
inline constexpr TokenId I = 14;
inline constexpr TokenId K = 15;
inline constexpr TokenId L = 16;
inline constexpr TokenId M = 17;
inline constexpr TokenId Mox = 18;
inline constexpr TokenId F = 19;
inline constexpr TokenId P = 20;
inline constexpr TokenId S = 21;
inline constexpr TokenId T = 22;
inline constexpr TokenId W = 23;
inline constexpr TokenId Y = 24;
inline constexpr TokenId V = 25;
}  // namespace tok

struct TokenInfo {
  std::string_view text;  // written form, variable mods in "(+x.xx)" syntax
  TokenKind kind;
  double mass;  // residue mass in Da; 0 for special tokens
};

const std::array<TokenInfo, kVocabSize>& vocabulary();

inline const TokenInfo& token_info(TokenId id) { return vocabulary()[id]; }

inline bool is_residue(TokenId id) {
  TokenKind k = token_info(id).kind;
  return k == TokenKind::Residue || k == TokenKind::ModifiedResidue;
}

// Residue mass of a residue or modified-residue token. Throws
// std::invalid_argument for special tokens.
double residue_mass(TokenId id);

enum class IonSeries : std::uint8_t { B, Y };

struct IonType {
  std::string_view name;
  IonSeries series;
  int charge;           // 1 or 2
  double neutral_loss;  // 0, H2O or NH3
};

// Ion order: b, y, b(2+), y(2+), b-H2O, y-H2O, b-NH3, y-NH3.
const std::array<IonType, kNumIonTypes>& ion_types();

// Theoretical m/z for placing `candidate` between a prefix and a suffix.
// prefix_mass / suffix_mass are residue-mass sums strictly before / after the
// candidate. b ions cover prefix+candidate, y ions cover the suffix.
double theoretical_mz(double prefix_mass, double suffix_mass, TokenId candidate,
                      const IonType& ion);

// A peptide is an ordered list of residue tokens (no specials).
using Peptide = std::vector<TokenId>;

// Total neutral mass: sum of residue masses + H2O. Throws on empty input.
double precursor_mass(const Peptide& peptide);

// Residue-mass sum without the water term.
double residue_sum(const Peptide& peptide);

std::string peptide_to_string(const Peptide& peptide);

// Parses "GAM(+15.99)K" style strings. Plain "C" is accepted and maps to the
// carbamidomethylated token. Throws std::invalid_argument with a message
// naming the offending position on unknown letters or malformed mods.
Peptide parse_peptide(std::string_view text);

}  // namespace setnovo::chem
