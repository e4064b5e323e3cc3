#include "synth/agents/prompts.hpp"

#include <fstream>
#include <sstream>

#include "synth/core/error.hpp"
#include "synth/util/strings.hpp"

namespace synth::agents {

PromptLibrary::PromptLibrary(std::string directory) : directory_(std::move(directory)) {}

std::string substitute_placeholders(const std::string& text,
                                    const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t open = text.find("{{", pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        std::size_t close = text.find("}}", open + 2);
        if (close == std::string::npos)
            throw ConfigError("unterminated {{ placeholder in prompt template");
        out.append(text, pos, open - pos);
        const std::string name = util::trim(text.substr(open + 2, close - open - 2));
        auto it = values.find(name);
        if (it == values.end())
            throw ConfigError("prompt template references unknown placeholder '" + name + "'");
        out += it->second;
        pos = close + 2;
    }
    return out;
}

std::vector<Message> PromptLibrary::render(
    const std::string& stage, const std::map<std::string, std::string>& values) const {
    const std::string path = directory_ + "/" + stage + ".txt";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("missing prompt template: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::string system_part, user_part;
    const std::string marker = "\n---\n";
    std::size_t split = text.find(marker);
    if (split == std::string::npos) {
        user_part = text;
    } else {
        system_part = text.substr(0, split);
        user_part = text.substr(split + marker.size());
    }

    std::vector<Message> messages;
    if (!util::trim(system_part).empty())
        messages.push_back({"system", substitute_placeholders(system_part, values)});
    std::string user = substitute_placeholders(user_part, values);
    if (util::trim(user).empty())
        throw ConfigError("prompt template '" + stage + "' renders an empty user message");
    messages.push_back({"user", std::move(user)});
    return messages;
}

}  // namespace synth::agents
