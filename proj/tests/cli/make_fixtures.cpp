// Writes the small image set used by the command-line tests.

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "symdet/imageio.hpp"
#include "synthetic.hpp"

using namespace symdet;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s OUTPUT_DIR\n", argv[0]);
    return 2;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir / "images");
  std::ofstream gt(dir / "groundtruth.txt");

  const testing::SyntheticCase cases[] = {
      testing::mirrored_texture(128, 112, 3),
      testing::rotate_and_crop(testing::mirrored_texture(160, 160, 4), 25.0),
  };
  for (int i = 0; i < 2; ++i) {
    const std::string id = "mirror_" + std::to_string(i + 1);
    write_image(dir / "images" / (id + ".png"), to_bgr8(cases[i].image));
    char line[256];
    std::snprintf(line, sizeof line, "%s %.6f %.6f %.6f %.6f\n", id.c_str(), cases[i].axis.a.x,
                  cases[i].axis.a.y, cases[i].axis.b.x, cases[i].axis.b.y);
    gt << line;
  }

  write_image(dir / "black.png", to_bgr8(ColorImage{Grid<Rgb>(64, 48), false}));
  std::ofstream(dir / "corrupt.png") << "not an image\n";
  std::ofstream(dir / "bad.cfg") << "scales = 12\nno_such_key = 3\n";
  std::ofstream(dir / "small.cfg") << "# quick settings for tests\nscales = 6\norientations = 16\n";
  return 0;
}
