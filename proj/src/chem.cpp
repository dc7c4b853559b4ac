#include "setnovo/chem.hpp"

#include <stdexcept>

namespace setnovo::chem {

namespace {

constexpr double kUnmodC = composition_mass(3, 5, 1, 1, 1);

constexpr std::array<TokenInfo, kVocabSize> kVocab = {{
    {"<pad>", TokenKind::Pad, 0.0},
    {"<s>", TokenKind::Start, 0.0},
    {"</s>", TokenKind::End, 0.0},
    {"A", TokenKind::Residue, composition_mass(3, 5, 1, 1)},
    {"R", TokenKind::Residue, composition_mass(6, 12, 4, 1)},
    {"N", TokenKind::Residue, composition_mass(4, 6, 2, 2)},
    {"N(+.98)", TokenKind::ModifiedResidue,
     composition_mass(4, 6, 2, 2) + kDeltaDeamidation},
    {"D", TokenKind::Residue, composition_mass(4, 5, 1, 3)},
    // C always carries the fixed carbamidomethyl group.
    {"C(+57.02)", TokenKind::Residue, kUnmodC + kDeltaCarbamidomethyl},
    {"E", TokenKind::Residue, composition_mass(5, 7, 1, 3)},
    {"Q", TokenKind::Residue, composition_mass(5, 8, 2, 2)},
    {"Q(+.98)", TokenKind::ModifiedResidue,
     composition_mass(5, 8, 2, 2) + kDeltaDeamidation},
    {"G", TokenKind::Residue, composition_mass(2, 3, 1, 1)},
    {"H", TokenKind::Residue, composition_mass(6, 7, 3, 1)},
    {"I", TokenKind::Residue, composition_mass(6, 11, 1, 1)},
    {"K", TokenKind::Residue, composition_mass(6, 12, 2, 1)},
    {"L", TokenKind::Residue, composition_mass(6, 11, 1, 1)},
    {"M", TokenKind::Residue, composition_mass(5, 9, 1, 1, 1)},
    {"M(+15.99)", TokenKind::ModifiedResidue,
     composition_mass(5, 9, 1, 1, 1) + kDeltaOxidation},
    {"F", TokenKind::Residue, composition_mass(9, 9, 1, 1)},
    {"P", TokenKind::Residue, composition_mass(5, 7, 1, 1)},
    {"S", TokenKind::Residue, composition_mass(3, 5, 1, 2)},
    {"T", TokenKind::Residue, composition_mass(4, 7, 1, 2)},
    {"W", TokenKind::Residue, composition_mass(11, 10, 2, 1)},
    {"Y", TokenKind::Residue, composition_mass(9, 9, 1, 2)},
    {"V", TokenKind::Residue, composition_mass(5, 9, 1, 1)},
}};

constexpr std::array<IonType, kNumIonTypes> kIonTypes = {{
    {"b", IonSeries::B, 1, 0.0},
    {"y", IonSeries::Y, 1, 0.0},
    {"b(2+)", IonSeries::B, 2, 0.0},
    {"y(2+)", IonSeries::Y, 2, 0.0},
    {"b-H2O", IonSeries::B, 1, kMassH2O},
    {"y-H2O", IonSeries::Y, 1, kMassH2O},
    {"b-NH3", IonSeries::B, 1, kMassNH3},
    {"y-NH3", IonSeries::Y, 1, kMassNH3},
}};

}  // namespace

const std::array<TokenInfo, kVocabSize>& vocabulary() { return kVocab; }

const std::array<IonType, kNumIonTypes>& ion_types() { return kIonTypes; }

double residue_mass(TokenId id) {
  const TokenInfo& info = token_info(id);
  if (info.kind != TokenKind::Residue && info.kind != TokenKind::ModifiedResidue)
    throw std::invalid_argument("no mass defined for special token '" +
                                std::string(info.text) + "'");
  return info.mass;
}

double theoretical_mz(double prefix_mass, double suffix_mass, TokenId candidate,
                      const IonType& ion) {
  if (prefix_mass < 0.0 || suffix_mass < 0.0)
    throw std::domain_error("negative fragment mass");
  double fragment = ion.series == IonSeries::B
                        ? prefix_mass + residue_mass(candidate)
                        : suffix_mass + kMassH2O;
  double z = static_cast<double>(ion.charge);
  return (fragment + z * kMassProton - ion.neutral_loss) / z;
}

double residue_sum(const Peptide& peptide) {
  double total = 0.0;
  for (TokenId id : peptide) total += residue_mass(id);
  return total;
}

double precursor_mass(const Peptide& peptide) {
  if (peptide.empty()) throw std::invalid_argument("empty peptide");
  return residue_sum(peptide) + kMassH2O;
}

std::string peptide_to_string(const Peptide& peptide) {
  std::string out;
  for (TokenId id : peptide) out += token_info(id).text;
  return out;
}

Peptide parse_peptide(std::string_view text) {
  Peptide out;
  std::size_t i = 0;
  while (i < text.size()) {
    char letter = text[i];
    std::string_view mod;
    std::size_t next = i + 1;
    if (next < text.size() && text[next] == '(') {
      std::size_t close = text.find(')', next);
      if (close == std::string_view::npos)
        throw std::invalid_argument("unterminated modification at position " +
                                    std::to_string(i));
      mod = text.substr(next, close - next + 1);
      next = close + 1;
    }

    TokenId id = tok::Pad;
    if (mod.empty()) {
      switch (letter) {
        case 'A': id = tok::A; break;
        case 'R': id = tok::R; break;
        case 'N': id = tok::N; break;
        case 'D': id = tok::D; break;
        case 'C': id = tok::Ccam; break;
        case 'E': id = tok::E; break;
        case 'Q': id = tok::Q; break;
        case 'G': id = tok::G; break;
        case 'H': id = tok::H; break;
        case 'I': id = tok::I; break;
        case 'K': id = tok::K; break;
        case 'L': id = tok::L; break;
        case 'M': id = tok::M; break;
        case 'F': id = tok::F; break;
        case 'P': id = tok::P; break;
        case 'S': id = tok::S; break;
        case 'T': id = tok::T; break;
        case 'W': id = tok::W; break;
        case 'Y': id = tok::Y; break;
        case 'V': id = tok::V; break;
        default:
          throw std::invalid_argument("unknown residue letter '" +
                                      std::string(1, letter) + "' at position " +
                                      std::to_string(i));
      }
    } else if (letter == 'M' && mod == "(+15.99)") {
      id = tok::Mox;
    } else if (letter == 'N' && mod == "(+.98)") {
      id = tok::Ndeam;
    } else if (letter == 'Q' && mod == "(+.98)") {
      id = tok::Qdeam;
    } else if (letter == 'C' && mod == "(+57.02)") {
      id = tok::Ccam;
    } else {
      throw std::invalid_argument("unknown modification '" + std::string(1, letter) +
                                  std::string(mod) + "' at position " +
                                  std::to_string(i));
    }
    out.push_back(id);
    i = next;
  }
  return out;
}

}  // namespace setnovo::chem
