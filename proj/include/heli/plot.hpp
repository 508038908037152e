#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <utility>

#include "heli/errors.hpp"

namespace heli {

// Writes a small self-contained Python script that plots the tracking error
// and control input of one or more exported CSVs (label -> csv filename,
// resolved relative to the script's own directory). Running it needs only
// matplotlib; it saves tracking_error.png and control_input.png next to
// itself.
inline void emit_plot_script(const std::filesystem::path& script_path,
                             std::span<const std::pair<std::string, std::string>> runs) {
    std::ofstream f(script_path);
    if (!f) {
        throw io_error("emit_plot_script: cannot open " + script_path.string() + " for writing");
    }
    f << "#!/usr/bin/env python3\n"
         "\"\"\"Plot tracking error and control input from exported run CSVs.\"\"\"\n"
         "import csv\n"
         "import math\n"
         "import os\n"
         "\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "HERE = os.path.dirname(os.path.abspath(__file__))\n"
         "RUNS = [\n";
    for (const auto& [label, csv_name] : runs) {
        f << "    (\"" << label << "\", \"" << csv_name << "\"),\n";
    }
    f << "]\n"
         "\n"
         "\n"
         "def load(name):\n"
         "    with open(os.path.join(HERE, name), newline=\"\") as fh:\n"
         "        rows = list(csv.DictReader(fh))\n"
         "    t = [float(r[\"t\"]) for r in rows]\n"
         "    e1 = [math.degrees(float(r[\"e1\"])) for r in rows]\n"
         "    u1 = [float(r[\"u1\"]) for r in rows]\n"
         "    return t, e1, u1\n"
         "\n"
         "\n"
         "def main():\n"
         "    data = [(label, *load(name)) for label, name in RUNS]\n"
         "    for fname, idx, ylabel in [\n"
         "        (\"tracking_error.png\", 2, \"elevation error e1 [deg]\"),\n"
         "        (\"control_input.png\", 3, \"control input u1 [N]\"),\n"
         "    ]:\n"
         "        fig, ax = plt.subplots(figsize=(8, 4.5))\n"
         "        for item in data:\n"
         "            ax.plot(item[1], item[idx], label=item[0], linewidth=1.0)\n"
         "        ax.set_xlabel(\"t [s]\")\n"
         "        ax.set_ylabel(ylabel)\n"
         "        ax.grid(True, alpha=0.3)\n"
         "        ax.legend()\n"
         "        fig.tight_layout()\n"
         "        fig.savefig(os.path.join(HERE, fname), dpi=150)\n"
         "        plt.close(fig)\n"
         "\n"
         "\n"
         "if __name__ == \"__main__\":\n"
         "    main()\n";
    if (!f) {
        throw io_error("emit_plot_script: write to " + script_path.string() + " failed");
    }
}

}  // namespace heli
