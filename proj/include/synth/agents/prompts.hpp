#pragma once

#include <map>
#include <string>
#include <vector>

#include "synth/agents/client.hpp"

namespace synth::agents {

// Loads prompt templates from a directory of "<stage>.txt" files. A template
// is a system part and a user part separated by a line containing only
// "---"; either part may use {{name}} placeholders.
class PromptLibrary {
  public:
    explicit PromptLibrary(std::string directory);

    // System + user message pair with every placeholder substituted.
    // Missing template file, missing placeholder value, or a leftover
    // {{...}} after substitution is a ConfigError.
    std::vector<Message> render(const std::string& stage,
                                const std::map<std::string, std::string>& values) const;

    const std::string& directory() const { return directory_; }

  private:
    std::string directory_;
};

// Substitution helper, exposed for tests.
std::string substitute_placeholders(const std::string& text,
                                    const std::map<std::string, std::string>& values);

}  // namespace synth::agents
