#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rvp/manifest.hpp"
#include "rvp/render.hpp"

namespace rvp {

// QA template with {color}/{form} placeholders in the question and
// {category} in the answer.
struct PromptTemplate {
    std::string question = "What is the category of the object under the {color} {form}?";
    std::string answer = "{category}";
};

struct ConversationTurn {
    std::string role;  // "user" | "assistant"
    std::string text;
    bool operator==(const ConversationTurn&) const = default;
};

struct InstructionSample {
    std::string id;
    std::string rendered_image_path;
    PromptStyle prompt_style;
    std::vector<ConversationTurn> conversations;
    std::string source_sample_id;
    std::string source_region_id;
    PixelPoint point;
    bool operator==(const InstructionSample&) const = default;
};

// "red dot", "purple circle", ... Fails on colors without a registered name.
std::string region_descriptor(const PromptStyle& style);

// Question with placeholders resolved; the leading image token mirrors the
// conversation wire format.
std::string resolve_question(const PromptTemplate& tmpl, const PromptStyle& style);
std::string resolve_answer(const PromptTemplate& tmpl, const std::string& category);

struct BuildParams {
    PromptStyle style;
    PromptTemplate tmpl;
    std::optional<GridSpec> grid;  // vote-mode fan-out for boxes
    std::uint64_t seed = 0;
    int jobs = 1;
};

// Render one marker per disentangled point and emit one instruction sample
// per rendered image. Rendered PNGs and their {point, style} sidecars are
// written under out_dir/images.
std::pair<std::vector<InstructionSample>, SkipReport> build_dataset(
    const AnnotationManifest& manifest, const BuildParams& params,
    const std::filesystem::path& out_dir);

std::string instruction_sample_to_json(const InstructionSample& s);
InstructionSample instruction_sample_from_json(const std::string& line);

void write_jsonl(const std::vector<InstructionSample>& samples,
                 const std::filesystem::path& path);
std::vector<InstructionSample> read_jsonl(const std::filesystem::path& path);

}  // namespace rvp
