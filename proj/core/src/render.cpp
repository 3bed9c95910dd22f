#include "mrp/render.hpp"

#include <sstream>

#include "mrp/error.hpp"

namespace mrp {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"};

const char* colour(std::size_t i) { return kPalette[i % (sizeof kPalette / sizeof *kPalette)]; }

}  // namespace

std::string render_svg(const Scenario& s, const PlanBundle* b, int px) {
    if (px < 4) throw DomainError("cell size too small to draw");
    const Workspace& w = s.workspace;
    const int W = w.width() * px, H = w.height() * px;
    auto cx = [&](Cell c) { return c.x * px + px / 2; };
    auto cy = [&](Cell c) { return c.y * px + px / 2; };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << ' ' << H << "\">\n";
    o << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n";
    o << "<g stroke=\"#e0e0e0\" stroke-width=\"1\">\n";
    for (int x = 0; x <= w.width(); ++x) o << "<line x1=\"" << x * px << "\" y1=\"0\" x2=\"" << x * px << "\" y2=\"" << H << "\"/>\n";
    for (int y = 0; y <= w.height(); ++y) o << "<line x1=\"0\" y1=\"" << y * px << "\" x2=\"" << W << "\" y2=\"" << y * px << "\"/>\n";
    o << "</g>\n<g fill=\"#404040\">\n";
    for (Cell c : w.obstacles())
        o << "<rect x=\"" << c.x * px << "\" y=\"" << c.y * px << "\" width=\"" << px << "\" height=\"" << px << "\"/>\n";
    o << "</g>\n";

    o << "<g fill=\"none\" stroke=\"#999999\" stroke-width=\"1.5\">\n";
    for (Cell c : s.potential_starts)
        o << "<rect x=\"" << c.x * px + px / 4 << "\" y=\"" << c.y * px + px / 4 << "\" width=\"" << px / 2
          << "\" height=\"" << px / 2 << "\"/>\n";
    o << "</g>\n";

    for (std::size_t i = 0; i < s.workers.size(); ++i) {
        const auto& loop = s.workers[i].loop;
        o << "<polyline fill=\"none\" stroke=\"" << colour(i) << "\" stroke-width=\"3\" points=\"";
        for (Cell c : loop.points()) o << cx(c) << ',' << cy(c) << ' ';
        o << "\"/>\n";
        o << "<circle cx=\"" << cx(loop.home()) << "\" cy=\"" << cy(loop.home()) << "\" r=\"" << px / 4 << "\" fill=\""
          << colour(i) << "\"/>\n";
    }

    if (b) {
        for (std::size_t j = 0; j < b->rechargers.size(); ++j) {
            const auto& traj = b->rechargers[j].trajectory;
            const char* col = colour(s.workers.size() + j);
            if (!traj.empty()) {
                o << "<polyline fill=\"none\" stroke=\"" << col
                  << "\" stroke-width=\"2\" stroke-dasharray=\"4 3\" points=\"";
                for (const auto& st : traj) o << cx(st.p) << ',' << cy(st.p) << ' ';
                o << "\"/>\n";
            }
            if (j < b->recharger_starts.size()) {
                Cell c = b->recharger_starts[j];
                o << "<circle cx=\"" << cx(c) << "\" cy=\"" << cy(c) << "\" r=\"" << px / 3
                  << "\" fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
            }
        }
        o << "<g fill=\"#ff7f0e\" stroke=\"#000000\" stroke-width=\"0.5\">\n";
        for (const auto& e : b->events)
            o << "<path d=\"M" << cx(e.cell) << ' ' << cy(e.cell) - px / 3 << " L" << cx(e.cell) + px / 3 << ' '
              << cy(e.cell) << " L" << cx(e.cell) << ' ' << cy(e.cell) + px / 3 << " L" << cx(e.cell) - px / 3 << ' '
              << cy(e.cell) << " Z\"><title>t=" << e.step << " worker " << e.worker << " +" << e.delta
              << "</title></path>\n";
        o << "</g>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace mrp
