/* SPDX-License-Identifier: Apache-2.0 */
/* Compiled as C to keep the public header C-clean. */
#include <string.h>

#include "hypc/hypc.h"

int hypc_c_smoke(void) {
  hypc_fdset* s = NULL;
  hypc_fdset* f = NULL;
  char* text = NULL;
  int rc = 0;
  if (hypc_fdset_parse("A -> B\nB -> C\n", &s) != HYPC_OK) return 1;
  if (hypc_fdset_size(s) != 2 || !hypc_fdset_is_parsimonious(s)) rc = 2;
  if (!rc && hypc_fdset_fold(s, &f) != HYPC_OK) rc = 3;
  if (!rc && hypc_fdset_to_text(f, &text) != HYPC_OK) rc = 4;
  if (!rc && strstr(text, "A -> C") == NULL) rc = 5;
  hypc_string_free(text);
  hypc_fdset_free(f);
  hypc_fdset_free(s);
  if (!rc && hypc_fdset_parse("A ->", &s) != HYPC_ERR_INPUT) rc = 6;
  if (!rc && strlen(hypc_last_error()) == 0) rc = 7;
  return rc;
}
