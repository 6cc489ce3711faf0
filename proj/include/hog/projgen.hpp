#pragma once

// Vendor project-creation script generation.
//
// Scripts resolve every path against the Tcl variable REPO_ROOT, which
// defaults to the working directory, so they never embed machine paths.
// The IDE project itself lands in $REPO_ROOT/Projects/<name>.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hog/config.hpp"
#include "hog/error.hpp"
#include "hog/generics.hpp"
#include "hog/tcl.hpp"
#include "hog/text.hpp"

namespace hog {

struct GenerationInput {
  ProjectConfig config;
  std::vector<SourceList> lists;
  std::vector<GenericBinding> bindings;
  /// Repo-relative directory holding hog.conf; hook paths resolve against it.
  std::string project_dir;
};

struct EnvRequirement {
  std::string variable;
  Vendor vendor;
  std::string purpose;

  friend bool operator==(const EnvRequirement&, const EnvRequirement&) = default;
};

inline constexpr std::string_view kTcllibPathVar = "HOG_TCLLIB_PATH";

inline std::vector<EnvRequirement> env_requirements(Vendor vendor) {
  if (vendor == Vendor::libero) {
    return {{std::string(kTcllibPathVar), Vendor::libero,
             "location of a tcllib installation (Libero ships an incomplete tcllib)"}};
  }
  return {};
}

/// Requirements of `vendor` that `env` does not satisfy (unset or empty).
inline std::vector<EnvRequirement> check_environment(Vendor vendor,
                                                     const std::map<std::string, std::string>& env) {
  std::vector<EnvRequirement> missing;
  for (auto& req : env_requirements(vendor)) {
    auto it = env.find(req.variable);
    if (it == env.end() || it->second.empty()) missing.push_back(std::move(req));
  }
  return missing;
}

inline std::string script_filename(const ProjectConfig& cfg) { return cfg.project_name + ".create.tcl"; }

namespace detail {

inline std::string extension(std::string_view path) {
  auto slash = path.rfind('/');
  auto dot = path.rfind('.');
  if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash)) return {};
  return text::to_lower(path.substr(dot + 1));
}

inline std::string repo_path(std::string_view rel) {
  return "[file join $REPO_ROOT " + tcl::word(rel) + "]";
}

class ScriptWriter {
 public:
  void line(std::string_view s) { out_.append(s).append("\n"); }
  void blank() { out_ += "\n"; }
  void raw(std::string_view s) { out_.append(s); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

inline std::string_view vivado_fileset(ListKind k) {
  switch (k) {
    case ListKind::src: return "sources_1";
    case ListKind::sim: return "sim_1";
    case ListKind::con: return "constrs_1";
  }
  return "sources_1";
}

inline std::string_view quartus_assignment(ListKind kind, const std::string& ext) {
  if (kind == ListKind::sim) return "EDA_TEST_BENCH_FILE";
  if (ext == "vhd" || ext == "vhdl") return "VHDL_FILE";
  if (ext == "v") return "VERILOG_FILE";
  if (ext == "sv") return "SYSTEMVERILOG_FILE";
  if (ext == "qip") return "QIP_FILE";
  if (ext == "ip") return "IP_FILE";
  if (ext == "sdc") return "SDC_FILE";
  if (ext == "tcl") return "SOURCE_TCL_SCRIPT_FILE";
  return "SOURCE_FILE";
}

inline std::string_view libero_link_option(ListKind kind, const std::string& ext) {
  switch (kind) {
    case ListKind::src: return "-hdl_source";
    case ListKind::sim: return "-stimulus";
    case ListKind::con:
      if (ext == "pdc") return "-io_pdc";
      if (ext == "ndc") return "-ndc";
      return "-sdc";
  }
  return "-hdl_source";
}

inline void write_entries(ScriptWriter& w, const GenerationInput& in) {
  const Vendor vendor = in.config.vendor;
  std::set<std::string> libero_libraries;
  for (const auto& list : in.lists) {
    w.blank();
    w.line("# " + (list.name.empty() ? std::string("list") : list.name) + "." + std::string(to_string(list.kind)));
    for (const auto& e : list.entries) {
      const auto ext = extension(e.path);
      w.line("set f " + repo_path(e.path));
      switch (vendor) {
        case Vendor::vivado:
          w.line("add_files -norecurse -fileset " + std::string(vivado_fileset(list.kind)) + " $f");
          if (list.kind != ListKind::con) w.line("set_property library " + tcl::word(e.library) + " [get_files $f]");
          for (const auto& [k, v] : e.properties) {
            w.line("set_property " + tcl::word(k) + " " + tcl::word(v) + " [get_files $f]");
          }
          break;
        case Vendor::quartus: {
          std::string cmd = "set_global_assignment -name " + std::string(quartus_assignment(list.kind, ext)) + " $f";
          if (list.kind != ListKind::con) cmd += " -library " + tcl::word(e.library);
          w.line(cmd);
          for (const auto& [k, v] : e.properties) w.line("# " + k + "=" + v + " has no quartus mapping");
          break;
        }
        case Vendor::libero:
          w.line("create_links " + std::string(libero_link_option(list.kind, ext)) + " $f");
          if (list.kind == ListKind::src) {
            if (libero_libraries.insert(e.library).second && e.library != "work") {
              w.line("add_library -library " + tcl::word(e.library));
            }
            w.line("add_file_to_library -library " + tcl::word(e.library) + " -file $f");
          }
          for (const auto& [k, v] : e.properties) w.line("# " + k + "=" + v + " has no libero mapping");
          break;
      }
    }
  }
}

inline void write_properties(ScriptWriter& w, const ProjectConfig& cfg) {
  if (cfg.properties.empty()) return;
  w.blank();
  w.line("# properties");
  for (const auto& [section, props] : cfg.properties) {
    for (const auto& [k, v] : props) {
      const bool main = section == "main";
      switch (cfg.vendor) {
        case Vendor::vivado:
          w.line("set_property -name " + tcl::word(k) + " -value " + tcl::word(v) + " -objects " +
                 (main ? std::string("[current_project]") : "[get_runs " + tcl::word(section) + "]"));
          break;
        case Vendor::quartus:
          w.line("set_global_assignment -name " + tcl::word(k) + " " + tcl::word(v) +
                 (main ? std::string() : " -section_id " + tcl::word(section)));
          break;
        case Vendor::libero:
          if (main) {
            w.line("project_settings -" + tcl::word(k) + " " + tcl::word(v));
          } else {
            w.line("configure_tool -name " + tcl::word(section) + " -params " + tcl::word(k + ":" + v));
          }
          break;
      }
    }
  }
}

}  // namespace detail

/// Builds the creation script. Equal inputs give byte-identical output.
inline std::string generate_creation_script(const GenerationInput& in) {
  const auto& cfg = in.config;
  if (auto diags = validate_config(cfg, in.lists); !diags.empty()) {
    throw Error(ErrorCode::InvalidConfig, text::join(diags, "; "));
  }
  for (const auto& b : in.bindings) {
    if (b.origin == GenericBinding::Origin::user && is_builtin_generic_name(b.name)) {
      throw Error(ErrorCode::ReservedNameError, "user generic '" + b.name + "' uses a builtin name");
    }
  }

  const std::string name = tcl::word(cfg.project_name);
  const std::string top = tcl::word(cfg.top_module);
  detail::ScriptWriter w;
  w.line("# " + cfg.project_name + " project creation script (" + std::string(to_string(cfg.vendor)) +
         "), generated from hog.conf; do not edit");
  if (cfg.vendor == Vendor::libero) {
    w.line("if {![info exists ::env(HOG_TCLLIB_PATH)] || $::env(HOG_TCLLIB_PATH) eq {}} {");
    w.line("  error {HOG_TCLLIB_PATH must point to a tcllib installation}");
    w.line("}");
    w.line("lappend auto_path $::env(HOG_TCLLIB_PATH)");
  }
  w.line("if {![info exists REPO_ROOT]} { set REPO_ROOT [pwd] }");
  w.line("set PROJECT_DIR [file join $REPO_ROOT Projects " + name + "]");
  w.line("file mkdir $PROJECT_DIR");

  switch (cfg.vendor) {
    case Vendor::vivado:
      w.line("create_project " + name + " $PROJECT_DIR -force");
      break;
    case Vendor::quartus:
      w.line("cd $PROJECT_DIR");
      w.line("project_new -overwrite -revision " + name + " " + name);
      w.line("set_global_assignment -name TOP_LEVEL_ENTITY " + top);
      break;
    case Vendor::libero:
      w.line("new_project -location $PROJECT_DIR -name " + name + " -hdl VHDL");
      break;
  }

  detail::write_entries(w, in);

  if (cfg.vendor == Vendor::vivado) {
    w.blank();
    w.line("set_property top " + top + " [current_fileset]");
  } else if (cfg.vendor == Vendor::libero) {
    w.blank();
    w.line("build_design_hierarchy");
    w.line("set_root -module {" + cfg.top_module + "::work}");
  }

  detail::write_properties(w, cfg);

  if (auto frag = render_assignments(in.bindings, cfg.vendor); !frag.empty()) {
    w.blank();
    w.line("# generics");
    w.raw(frag);
  }

  if (cfg.vendor == Vendor::quartus) w.line("export_assignments");

  if (cfg.post_creation_hook) {
    std::string hook = in.project_dir.empty() ? *cfg.post_creation_hook
                                              : in.project_dir + "/" + *cfg.post_creation_hook;
    w.blank();
    w.line("# post-creation hook");
    w.line("source " + detail::repo_path(normalize_repo_path(hook)));
  }
  return w.take();
}

}  // namespace hog
