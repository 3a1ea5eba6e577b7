#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "cts/common.hpp"

namespace cts {

// Event-type templates for the sentence-encoder embedding path. Placeholders
// in angle brackets are replaced by the actual arguments at embed time.
struct TemplateSet {
  std::map<std::string, std::string> templates;
  bool use_fallback = true;
  std::string fallback =
      "Indicated by the given trigger <Trigger>, involving <Theme> <Cause> <Site> <Product> "
      "<Participant>.";
};

inline const std::vector<std::string>& known_roles() {
  static const std::vector<std::string> roles = {"Trigger", "Theme",    "Cause",  "Site",
                                                 "Product", "Participant", "AtLoc", "FromLoc",
                                                 "ToLoc",   "Instrument",  "CSite"};
  return roles;
}

// Default template set (pathway-curation flavor). Alternative sets for the
// other event inventories ship as JSON under data/templates/.
inline TemplateSet default_template_set() {
  TemplateSet t;
  t.templates = {
      {"Conversion",
       "A specific trigger <Trigger> causes the transformation of a molecule <Theme> into another "
       "molecule <Product>."},
      {"Phosphorylation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> is modified by the "
       "addition of a phosphate group at a particular site <Site>, facilitated by another molecule "
       "<Cause>."},
      {"Dephosphorylation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> has a phosphate group "
       "removed from a particular site <Site>, facilitated by another molecule <Cause>."},
      {"Acetylation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> undergoes the addition "
       "of an acetyl group at a particular site <Site>, catalyzed by another molecule <Cause>."},
      {"Deacetylation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> has an acetyl group "
       "removed from a particular site <Site>, facilitated by another molecule <Cause>."},
      {"Ubiquitination",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> is modified by the "
       "attachment of one or more ubiquitin molecules at a particular site, facilitated by another "
       "molecule <Cause>, often involving a simple chemical group <Site> as the site of attachment."},
      {"Deubiquitination",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> has ubiquitin molecules "
       "removed from a particular site, facilitated by another molecule <Cause> involving a simple "
       "chemical group <Site> as the site of removal."},
      {"Hydroxylation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> undergoes the addition "
       "of a hydroxyl group at a particular site, catalyzed by another molecule <Cause> involving a "
       "simple chemical group <Site> as the site of attachment."},
      {"Dehydroxylation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> has a hydroxyl group "
       "removed from a particular site, facilitated by another molecule <Cause> involving a simple "
       "chemical group <Site> as the site of removal."},
      {"Methylation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> undergoes the addition "
       "of a methyl group at a particular site, facilitated by another molecule <Cause> involving a "
       "simple chemical group <Site> as the site of attachment."},
      {"Demethylation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> has a methyl group "
       "removed from a particular site, facilitated by another molecule <Cause> involving a simple "
       "chemical group <Site> as the site of removal."},
      {"Localization",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> is directed to or away "
       "from a particular cellular component <AtLoc><FromLoc><ToLoc> or subcellular location within "
       "the cell."},
      {"Transport",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> is moved or conveyed to "
       "or away from a particular cellular component <FromLoc><ToLoc> or subcellular location within "
       "the cell."},
      {"Gene Expression",
       "Indicated by the given trigger <Trigger>, genetic information from a gene <Theme> is used to "
       "produce a functional gene product, such as RNA or protein."},
      {"Transcription",
       "Indicated by the given trigger <Trigger>, genetic information from a gene <Theme> is "
       "transcribed into RNA, usually messenger RNA (mRNA), by RNA polymerase."},
      {"Translation",
       "Indicated by the given trigger <Trigger>, the genetic information carried by mRNA <Theme> is "
       "used to synthesize a protein by ribosomes in the cell."},
      {"Degradation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> undergoes breakdown or "
       "degradation into smaller components."},
      {"Binding",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> interacts and forms a "
       "complex with another molecule(s) resulting in the product of a molecular complex <Product>."},
      {"Dissociation",
       "Indicated by the given trigger <Trigger>, a specific complex <Theme> breaks apart, resulting "
       "in the release of individual molecules <Product> as products."},
      {"Regulation",
       "Indicated by the given trigger <Trigger>, an entity <Theme> is controlled or influenced by "
       "another entity <Cause> to achieve a specific biological effect or outcome."},
      {"Positive Regulation",
       "Indicated by the given trigger <Trigger>, an entity <Theme> is promoted or enhanced by "
       "another entity <Cause> to achieve a specific biological effect or outcome."},
      {"Activation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> is stimulated or "
       "facilitated by another entity <Cause> to increase its activity, function, or biological "
       "effect."},
      {"Negative Regulation",
       "Indicated by the given trigger <Trigger>, an entity <Theme> is inhibited or suppressed by "
       "another entity <Cause> to achieve a specific biological effect or outcome."},
      {"Inactivation",
       "Indicated by the given trigger <Trigger>, a specific molecule <Theme> is deactivated or "
       "rendered inactive by another entity <Cause>, leading to a reduction or cessation of its "
       "biological function."},
      {"Pathway",
       "Indicated by the given trigger <Trigger>, involving one or more molecules <Participant> that "
       "collaborate to accomplish a specific biological function or response."},
  };
  return t;
}

inline TemplateSet template_set_from_json(const nlohmann::json& j, bool use_fallback = true) {
  TemplateSet t;
  t.use_fallback = use_fallback;
  for (const auto& [type, tmpl] : j.items()) {
    if (!tmpl.is_string()) throw ValueError("template for '" + type + "' must be a string");
    t.templates[type] = tmpl.get<std::string>();
  }
  return t;
}

inline nlohmann::json to_json(const TemplateSet& t) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [type, tmpl] : t.templates) j[type] = tmpl;
  return j;
}

}  // namespace cts
