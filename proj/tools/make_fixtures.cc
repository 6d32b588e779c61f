// Writes a synthetic aligned corpus for trying the amrseq commands:
//   train.amr dev.amr test.amr   Penman with # ::id / # ::snt
//   alignments.jsonl ner.jsonl   for every example
//   external.txt                 unlabeled sentences
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "amr/synthetic.h"
#include "amr/text.h"

int main(int argc, char **argv) {
  if (argc < 2) {
    std::cerr << "usage: amrseq_fixtures OUT_DIR [EXAMPLES [SEED [EXTERNAL]]]\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  const std::size_t n = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 200;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;
  const std::size_t external = argc > 4 ? std::strtoul(argv[4], nullptr, 10) : 5000;
  std::filesystem::create_directories(dir);

  std::vector<amr::SyntheticExample> all =
      amr::MakeSyntheticCorpus({n, seed, "fx"});
  const std::size_t dev = n / 10, test = n / 10, train = n - dev - test;
  auto slice = [&](std::size_t from, std::size_t count) {
    return std::vector<amr::SyntheticExample>(all.begin() + from,
                                              all.begin() + from + count);
  };
  amr::WriteFile((dir / "train.amr").string(),
                 amr::SyntheticAmrDocument(slice(0, train)));
  amr::WriteFile((dir / "dev.amr").string(),
                 amr::SyntheticAmrDocument(slice(train, dev)));
  amr::WriteFile((dir / "test.amr").string(),
                 amr::SyntheticAmrDocument(slice(train + dev, test)));
  amr::WriteFile((dir / "alignments.jsonl").string(),
                 amr::SyntheticAlignmentsJsonl(all));
  amr::WriteFile((dir / "ner.jsonl").string(), amr::SyntheticNerJsonl(all));
  std::string text;
  for (const std::string &s : amr::SyntheticSentences(external, seed + 1)) text += s + "\n";
  amr::WriteFile((dir / "external.txt").string(), text);
  return 0;
}
