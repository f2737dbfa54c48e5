package com.acme.api;

import com.acme.api.OrderDTO;

public class OrderController {
    private OrderDTO lastAccepted;

    public OrderDTO accept(String payload) {
        OrderDTO dto = new OrderDTO(payload);
        this.lastAccepted = dto;
        return dto;
    }

    public int pendingCount() {
        return lastAccepted == null ? 0 : 1;
    }
}
