#include <stdio.h>

#include "graphnls/graphnls.h"

int main(void) {
  graphnls_graph* g = NULL;
  char* json = NULL;
  int valid = 0;
  if (graphnls_graph_double_bridge(1.0, 0.5, &g) != GRAPHNLS_OK) return 1;
  if (graphnls_graph_validate(g, &json, &valid) != GRAPHNLS_OK || !valid) return 1;
  graphnls_string_free(json);
  graphnls_graph_free(g);
  if (graphnls_graph_parse("vertex a\n", &g) != GRAPHNLS_OK) return 1;
  if (graphnls_graph_validate(g, NULL, &valid) != GRAPHNLS_OK || valid) return 1;
  graphnls_graph_free(g);
  printf("graphnls %s\n", graphnls_version());
  return 0;
}
